"""FastAPI surface for the pattern-complexity toolkit."""

import asyncio
from concurrent.futures import ThreadPoolExecutor
from contextlib import asynccontextmanager
from typing import Any, Callable, Dict

from fastapi import FastAPI, HTTPException

from algebra.parser import parse_poly
from configurations import library
from configurations.descriptors import load_descriptor
from logger.logging import get_logger, setup_logging
from models.pydantic_models import (
    AnnihilateRequest,
    ComplexityRequest,
    HealthResponse,
    ScanRequest,
    TileRequest,
    VerifyRequest,
)
from services.annihilator_service import AnnihilatorService
from services.complexity_service import ComplexityService
from services.tiling_service import ClusterTile, CoTilerSet, TilingService
from utils.config_loader import ConfigLoader
from utils.exceptions import ToolkitError, VerificationFailure
from utils.regions import parse_region

# Initialize logging
config = ConfigLoader()
log_level = config.get("logging.level", "INFO")
log_file = config.get("logging.file", None)
fmt = config.get("logging.format", "%(asctime)s - %(levelname)s - %(message)s")
setup_logging(log_level=log_level, log_file=log_file, format=fmt)
logger = get_logger(__name__)

REQUEST_TIMEOUT = 120

# Global instances
annihilator_service = None
complexity_service = None
tiling_service = None
thread_pool = None


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Application lifespan management."""
    global annihilator_service, complexity_service, tiling_service, thread_pool

    try:
        logger.info("Starting Pattern Toolkit API")
        thread_pool = ThreadPoolExecutor(max_workers=int(config.get("api.workers", 4)))
        annihilator_service = AnnihilatorService(config)
        complexity_service = ComplexityService(config, annihilator_service)
        tiling_service = TilingService(config, annihilator_service)
        logger.info("All services initialized successfully")

    except Exception as e:
        error_msg = f"Failed to initialize services: {str(e)}"
        logger.error(error_msg)
        raise Exception(error_msg)

    yield

    logger.info("Shutting down Pattern Toolkit API")
    thread_pool.shutdown(wait=False)


app = FastAPI(
    title="Pattern Complexity Toolkit",
    description="Pattern complexity, annihilating polynomials and cluster tilings",
    version="1.0.0",
    lifespan=lifespan,
)


def _require(service, name: str):
    if service is None:
        raise HTTPException(status_code=503, detail=f"{name} not initialized")
    return service


async def _run(label: str, work: Callable[[], Any]) -> Any:
    """Run a blocking computation off the event loop with toolkit error mapping."""
    try:
        loop = asyncio.get_event_loop()
        return await asyncio.wait_for(
            loop.run_in_executor(thread_pool, work), timeout=REQUEST_TIMEOUT
        )
    except asyncio.TimeoutError:
        logger.error(f"{label} timed out after {REQUEST_TIMEOUT}s")
        raise HTTPException(status_code=504, detail=f"{label} timed out")
    except VerificationFailure as e:
        logger.error(f"Error in {label} -> {str(e)}")
        raise HTTPException(status_code=422, detail=str(e))
    except ToolkitError as e:
        logger.error(f"Error in {label} -> {str(e)}")
        raise HTTPException(status_code=400, detail=str(e))
    except HTTPException:
        raise
    except Exception as e:
        logger.error(f"Error in {label} -> {str(e)}")
        raise HTTPException(status_code=500, detail=str(e))


# --- Configurations ---


@app.get("/examples")
async def list_examples():
    """Built-in configuration names and their exactness classes."""
    examples = []
    for name in library.names():
        c = library.build(name)
        examples.append(
            {"name": name, "dimension": c.dimension, "exactness_class": c.exactness_class.value}
        )
    return {"examples": examples}


# --- Annihilators ---


@app.post("/verify")
async def verify(request: VerifyRequest):
    """Verify that a polynomial annihilates a configuration."""
    service = _require(annihilator_service, "Annihilator service")

    def work() -> Dict[str, Any]:
        c = load_descriptor(request.config)
        f = parse_poly(request.poly, c.dimension)
        region = parse_region(request.region, c.dimension) if request.region else None
        return service.verify_annihilator(f, c, region).model_dump(mode="json")

    return await _run("verify", work)


@app.post("/annihilate")
async def annihilate(request: AnnihilateRequest):
    """Search for a product of differences annihilating a configuration."""
    service = _require(annihilator_service, "Annihilator service")

    def work() -> Dict[str, Any]:
        c = load_descriptor(request.config)
        region = parse_region(request.region, c.dimension) if request.region else None
        cert = service.find_difference_product(c, request.max_norm, request.max_factors, region)
        return {
            "found": cert is not None,
            "certificate": cert.model_dump(mode="json") if cert else None,
        }

    return await _run("annihilate", work)


# --- Complexity ---


@app.post("/complexity")
async def complexity(request: ComplexityRequest):
    """Distinct-pattern count of a shape over a region."""
    service = _require(complexity_service, "Complexity service")

    def work() -> Dict[str, Any]:
        c = load_descriptor(request.config)
        region = parse_region(request.region, c.dimension)
        return service.distinct_patterns(c, request.shape, region).model_dump(mode="json")

    return await _run("complexity", work)


@app.post("/scan")
async def scan(request: ScanRequest):
    """Nivat scan of m x n rectangle complexities."""
    service = _require(complexity_service, "Complexity service")

    def work() -> Dict[str, Any]:
        c = load_descriptor(request.config)
        region = parse_region(request.region, c.dimension)
        rows = service.nivat_scan(c, request.max_m, request.max_n, region)
        return {
            "exactness_class": c.exactness_class.value,
            "rows": [r.model_dump(mode="json") for r in rows],
        }

    return await _run("scan", work)


# --- Tiling ---


@app.post("/tile")
async def tile(request: TileRequest):
    """Decide whether a lattice-periodic set is a co-tiler of a cluster tile."""
    service = _require(tiling_service, "Tiling service")

    def work() -> Dict[str, Any]:
        d = ClusterTile.of(request.tile)
        cotiler = CoTilerSet.lattice(request.basis, request.residues)
        return {
            "verdict": service.is_cotiler(d, cotiler).model_dump(mode="json"),
            "identity": service.tiling_identity_check(d, cotiler).model_dump(mode="json"),
        }

    return await _run("tile", work)


# --- Health ---


@app.get("/", response_model=HealthResponse)
@app.get("/health", response_model=HealthResponse)
async def health():
    """Health check endpoint."""
    services = {
        "annihilator": "ready" if annihilator_service else "not loaded",
        "complexity": "ready" if complexity_service else "not loaded",
        "tiling": "ready" if tiling_service else "not loaded",
    }
    ready = all(v == "ready" for v in services.values())
    return HealthResponse(status="ok" if ready else "degraded", services=services, version="1.0.0")


if __name__ == "__main__":
    import uvicorn

    uvicorn.run(
        app,
        host=config.get("api.host", "0.0.0.0"),
        port=int(config.get("api.port", 8000)),
    )
