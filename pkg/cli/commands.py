"""Command-line front end: ``pattern-toolkit <command> [options]``.

Exit codes: 0 success, 1 verification failure (witness printed), 2 usage
error, 3 inconclusive search.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from algebra.parser import parse_poly
from configurations import library
from configurations.base import Configuration
from configurations.descriptors import dump_descriptor, load_descriptor
from logger.logging import get_logger, setup_logging
from models.pydantic_models import RunManifest, TilingStatus
from services.annihilator_service import AnnihilatorService
from services.complexity_service import ComplexityService
from services.decomposition_service import DecompositionService
from services.render_service import RenderService
from services.tiling_service import ClusterTile, CoTilerSet, TilingService
from utils.config_loader import ConfigLoader
from utils.exceptions import InconclusiveError, ToolkitError, VerificationFailure
from utils.regions import Box, parse_region, rectangle

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3


class InvalidArguments(ToolkitError, ValueError):
    """Flags are missing or inconsistent."""


TILE_EXAMPLES = {
    "interval": library.interval_tile,
    "corner": library.corner_tile,
}


class Context:
    """Settings and lazily built services shared by one invocation."""

    def __init__(self, settings: ConfigLoader):
        self.settings = settings
        self._services: Dict[str, Any] = {}

    def _get(self, name: str, factory):
        if name not in self._services:
            self._services[name] = factory()
        return self._services[name]

    @property
    def annihilator(self) -> AnnihilatorService:
        return self._get("annihilator", lambda: AnnihilatorService(self.settings))

    @property
    def complexity(self) -> ComplexityService:
        return self._get(
            "complexity", lambda: ComplexityService(self.settings, self.annihilator)
        )

    @property
    def decomposition(self) -> DecompositionService:
        return self._get(
            "decomposition", lambda: DecompositionService(self.settings, self.annihilator)
        )

    @property
    def tiling(self) -> TilingService:
        return self._get("tiling", lambda: TilingService(self.settings, self.annihilator))

    @property
    def render(self) -> RenderService:
        return self._get("render", lambda: RenderService(self.settings))


# --- shared helpers ---


def _manifest(args: argparse.Namespace) -> RunManifest:
    skip = {"command", "handler", "config", "out", "settings", "log_level"}
    parameters = {
        k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None
    }
    return RunManifest(
        command=args.command,
        inputs=[args.config] if getattr(args, "config", None) else [],
        parameters=parameters,
        outputs=[args.out] if getattr(args, "out", None) else [],
        seed=getattr(args, "seed", None),
    )


def _load(args: argparse.Namespace) -> Configuration:
    if args.config:
        return load_descriptor(args.config)
    if args.name:
        return library.build(args.name, args.n)
    raise InvalidArguments("give --config PATH or --name EXAMPLE")


def _region(args: argparse.Namespace, c: Configuration, default: Box) -> Box:
    text = getattr(args, "region", None)
    return parse_region(text, c.dimension) if text else default


def _write(args: argparse.Namespace, text: str):
    if args.out:
        path = Path(args.out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
        logger.info(f"Wrote {path}")
    else:
        sys.stdout.write(text)


def _emit_json(args: argparse.Namespace, payload: Dict[str, Any]):
    document = {"manifest": _manifest(args).model_dump(), **payload}
    _write(args, json.dumps(document, indent=2, sort_keys=False, default=str) + "\n")


def _dump(model) -> Dict[str, Any]:
    return model.model_dump(mode="json", exclude_none=True)


# --- commands ---


def cmd_scan(args: argparse.Namespace, ctx: Context) -> int:
    c = _load(args)
    m_max = args.max_m or args.max or 6
    n_max = args.max_n or args.max or 6
    radius = ctx.complexity.scan_radius
    region = _region(args, c, Box.cube(2, -radius, radius))
    rows = ctx.complexity.nivat_scan(c, m_max, n_max, region)
    if args.format == "json":
        _emit_json(
            args,
            {
                "exactness_class": c.exactness_class.value,
                "region": region.to_text(),
                "rows": [_dump(r) for r in rows],
            },
        )
    else:
        lines = [
            f"# manifest: {_manifest(args).model_dump_json()}",
            f"# exactness_class: {c.exactness_class.value}",
            "m\tn\tcount\tmn\tflag\tverdict",
        ]
        lines += [f"{r.m}\t{r.n}\t{r.count}\t{r.mn}\t{r.flag}\t{r.verdict}" for r in rows]
        _write(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_annihilate(args: argparse.Namespace, ctx: Context) -> int:
    c = _load(args)
    service = ctx.annihilator
    region = _region(args, c, service.default_region(c))
    if args.shape:
        m, n = (int(x) for x in args.shape.lower().split("x"))
        found = service.find_annihilator(c, rectangle(m, n), region)
        if found is None:
            raise InconclusiveError(f"no annihilator over the {m}x{n} shape")
        verdict = service.verify_annihilator(found.f, c, region)
        _emit_json(args, {"annihilator": _dump(found.report), "verdict": _dump(verdict)})
        return EXIT_FAILURE if verdict.refuted else EXIT_OK

    cert = service.find_difference_product(c, args.budget, args.max_factors, region)
    if cert is None:
        raise InconclusiveError("no difference-product annihilator within the budget")
    _emit_json(args, {"certificate": _dump(cert)})
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, ctx: Context) -> int:
    c = _load(args)
    if not args.poly:
        raise InvalidArguments("verify needs --poly")
    f = parse_poly(args.poly, c.dimension)
    region = _region(args, c, ctx.annihilator.default_region(c))
    verdict = ctx.annihilator.verify_annihilator(f, c, region)
    _emit_json(args, {"verdict": _dump(verdict)})
    if verdict.refuted:
        print(
            f"nonzero at {tuple(verdict.position)}: value {verdict.value}",
            file=sys.stderr,
        )
        return EXIT_FAILURE
    return EXIT_OK


def cmd_decompose(args: argparse.Namespace, ctx: Context) -> int:
    c = _load(args)
    service = ctx.decomposition
    window = (
        parse_region(args.window, c.dimension) if args.window else service.default_window(c)
    )
    if args.factor:
        factors = [parse_poly(text, c.dimension) for text in args.factor]
        result = service.decompose_by_factors(c, factors, window, include_dumps=args.dumps)
    else:
        result = service.decompose_auto(
            c, args.budget, args.max_factors, window, include_dumps=args.dumps
        )
    _emit_json(
        args,
        {
            "exactness_class": c.exactness_class.value,
            "decomposition": _dump(result.report),
        },
    )
    return EXIT_OK


def cmd_classify(args: argparse.Namespace, ctx: Context) -> int:
    c = _load(args)
    service = ctx.annihilator
    region = _region(args, c, service.default_region(c))
    cert = service.find_difference_product(c, args.max_norm, args.max_factors, region)
    if cert is None:
        raise InconclusiveError("no difference-product annihilator to classify with")
    result = service.classify_periodicity(cert, c, args.budget, region)
    _emit_json(
        args,
        {
            "exactness_class": c.exactness_class.value,
            "certificate": _dump(cert),
            "classification": _dump(result),
        },
    )
    return EXIT_OK


def _tile_inputs(args: argparse.Namespace):
    if args.example:
        cells, indicator = TILE_EXAMPLES[args.example]()
        return ClusterTile.of(cells), CoTilerSet(indicator)
    if not (args.tile and args.basis):
        raise InvalidArguments("tile needs --example or both --tile and --basis")
    tile = ClusterTile.of(json.loads(args.tile))
    residues = json.loads(args.residues) if args.residues else None
    return tile, CoTilerSet.lattice(json.loads(args.basis), residues)


def cmd_tile(args: argparse.Namespace, ctx: Context) -> int:
    tile, cotiler = _tile_inputs(args)
    service = ctx.tiling
    verdict = service.is_cotiler(tile, cotiler)
    payload: Dict[str, Any] = {
        "tile": [list(v) for v in tile.cells],
        "verdict": _dump(verdict),
        "identity": _dump(service.tiling_identity_check(tile, cotiler)),
    }
    if verdict.status != TilingStatus.PROVEN_CONSTANT_ONE.value:
        _emit_json(args, payload)
        print(
            f"{tuple(verdict.position)} covered {verdict.cover_count} times",
            file=sys.stderr,
        )
        return EXIT_FAILURE
    if args.prime:
        payload["prime_periods"] = _dump(service.prime_periodicity_check(tile, cotiler))
    _emit_json(args, payload)
    return EXIT_OK


def cmd_render(args: argparse.Namespace, ctx: Context) -> int:
    c = _load(args)
    region = _region(args, c, Box.cube(c.dimension, -10, 10))
    values = c.window(region)
    renderer = ctx.render
    if args.format == "ppm":
        if not args.out:
            raise InvalidArguments("ppm output needs --out")
        sidecar = renderer.write_ppm(values, region, args.out)
        manifest = _manifest(args)
        manifest.outputs.append(str(sidecar))
        data = json.loads(sidecar.read_text())
        sidecar.write_text(json.dumps({"manifest": manifest.model_dump(), **data}, indent=2))
    elif args.format == "png":
        if not args.out:
            raise InvalidArguments("png output needs --out")
        renderer.png(values, region, args.out)
    else:
        header = f"# manifest: {_manifest(args).model_dump_json()}"
        text = renderer.ascii(values)
        _write(args, f"{header}\n{text}\n{renderer.legend_text()}\n")
    return EXIT_OK


def cmd_examples(args: argparse.Namespace, ctx: Context) -> int:
    if not args.name:
        names = library.names() + ["t-shape"]
        _write(args, "\n".join(names) + "\n")
        return EXIT_OK
    if args.name == "t-shape":
        _emit_json(args, {"shape": [list(v) for v in library.t_shape()]})
        return EXIT_OK
    c = library.build(args.name, args.n)
    if c.dimension == 2 and args.window:
        region = parse_region(args.window, 2)
        renderer = ctx.render
        header = f"# manifest: {_manifest(args).model_dump_json()}"
        grid = renderer.ascii(c.window(region))
        _write(args, f"{header}\n{grid}\n{renderer.legend_text()}\n")
    else:
        _write(args, dump_descriptor(c) + "\n")
    return EXIT_OK


# --- parser ---


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON configuration descriptor (path or text)")
    common.add_argument("--name", help="Built-in example name")
    common.add_argument("--n", type=int, help="Example parameter (two-lines offset)")
    common.add_argument("--region", help="Region a..b[,a..b...]")
    common.add_argument("--out", help="Output path (default: stdout)")
    common.add_argument("--seed", type=int, help="Seed recorded in the manifest")
    common.add_argument("--settings", help="Settings YAML (default: config/config.yaml)")
    common.add_argument("--log-level", help="Override the configured log level")

    parser = argparse.ArgumentParser(
        prog="pattern-toolkit",
        description="Pattern complexity, annihilators, decompositions and tilings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan", parents=[common], help="Nivat scan of m x n complexities")
    p.add_argument("--max", type=int, help="Scan 1..M in both directions")
    p.add_argument("--max-m", type=int)
    p.add_argument("--max-n", type=int)
    p.add_argument("--format", choices=["tsv", "json"], default="tsv")
    p.set_defaults(handler=cmd_scan)

    p = sub.add_parser("annihilate", parents=[common], help="Search for an annihilator")
    p.add_argument("--shape", help="Rectangle MxN for the pattern-matrix search")
    p.add_argument("--budget", type=int, help="Max Chebyshev norm of difference vectors")
    p.add_argument("--max-factors", type=int)
    p.set_defaults(handler=cmd_annihilate)

    p = sub.add_parser("verify", parents=[common], help="Verify that f annihilates c")
    p.add_argument("--poly", help="Polynomial text")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("decompose", parents=[common], help="Periodic decomposition")
    p.add_argument("--factor", action="append", help="Line polynomial (repeatable)")
    p.add_argument("--window", help="Evidence window a..b[,a..b...]")
    p.add_argument("--budget", type=int, help="Max norm when searching factors")
    p.add_argument("--max-factors", type=int)
    p.add_argument("--dumps", action="store_true", help="Include window dumps")
    p.set_defaults(handler=cmd_decompose)

    p = sub.add_parser("classify", parents=[common], help="Periodicity classification")
    p.add_argument("--budget", type=int, help="Period norm bound")
    p.add_argument("--max-norm", type=int)
    p.add_argument("--max-factors", type=int)
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser("tile", parents=[common], help="Co-tiler and prime-period checks")
    p.add_argument("--example", choices=sorted(TILE_EXAMPLES))
    p.add_argument("--tile", help="JSON list of cells")
    p.add_argument("--basis", help="JSON lattice basis of the co-tiler")
    p.add_argument("--residues", help="JSON coset representatives in the co-tiler")
    p.add_argument("--prime", action="store_true", help="Also check p(v-u) periods")
    p.set_defaults(handler=cmd_tile)

    p = sub.add_parser("render", parents=[common], help="Render a window")
    p.add_argument("--format", choices=["ascii", "ppm", "png"], default="ascii")
    p.set_defaults(handler=cmd_render)

    p = sub.add_parser("examples", parents=[common], help="Built-in configurations")
    p.add_argument("--window", help="ASCII window for two-dimensional examples")
    p.set_defaults(handler=cmd_examples)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    settings = ConfigLoader(args.settings) if args.settings else ConfigLoader()
    setup_logging(
        log_level=args.log_level or settings.get("logging.level", "INFO"),
        log_file=settings.get("logging.file", None),
        format=settings.get(
            "logging.format", "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
        ),
    )
    ctx = Context(settings)
    try:
        return args.handler(args, ctx)
    except VerificationFailure as e:
        logger.error(f"Verification failed -> {str(e)}")
        print(f"verification failure: {e}", file=sys.stderr)
        return EXIT_FAILURE
    except InconclusiveError as e:
        logger.warning(f"Inconclusive -> {str(e)}")
        print(f"inconclusive: {e}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except (ToolkitError, ValueError, OSError) as e:
        logger.error(f"Error in {args.command} -> {str(e)}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
