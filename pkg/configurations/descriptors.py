"""Load and dump configuration descriptors (JSON)."""

import json
from pathlib import Path
from typing import Any, Dict, Union

from algebra.laurent import to_text
from algebra.parser import parse_poly
from configurations import library
from configurations.base import Configuration
from configurations.beatty import BeattyConfig, QuadraticIrrational
from configurations.derived import DerivedConfig
from configurations.periodic import FiberPeriodicConfig, FullPeriodicConfig, constant
from configurations.random_config import RandomConfig
from logger.logging import get_logger
from models.descriptor_models import ConfigDescriptor, DescriptorType
from utils.exceptions import DimensionMismatchError, PreconditionError
from utils.lattice import HermiteLattice

logger = get_logger(__name__)


def build_config(desc: ConfigDescriptor) -> Configuration:
    """Configuration described by a validated descriptor."""
    kind = DescriptorType(desc.type)
    children = [build_config(child) for child in desc.operands]

    if kind == DescriptorType.FULL_PERIODIC:
        lattice = HermiteLattice(desc.basis)
        table = {lattice.reduce(e.at): e.value for e in desc.table}
        if desc.default is not None:
            for rep in lattice.representatives():
                table.setdefault(rep, desc.default)
        config = FullPeriodicConfig(desc.basis, table)
    elif kind == DescriptorType.FIBER_PERIODIC:
        config = FiberPeriodicConfig(desc.period, {tuple(e.at): e.value for e in desc.table})
    elif kind == DescriptorType.BEATTY:
        a = desc.alpha
        config = BeattyConfig(QuadraticIrrational(a.p, a.s, a.q, a.r), desc.weights)
    elif kind == DescriptorType.CONSTANT:
        config = constant(desc.dim, desc.value)
    elif kind == DescriptorType.RANDOM:
        config = RandomConfig(desc.dim, desc.seed, desc.alphabet or (0, 1))
    elif kind == DescriptorType.EXAMPLE:
        config = library.build(desc.name, desc.n)
    elif kind == DescriptorType.SUM:
        config = DerivedConfig("sum", children, alphabet=desc.alphabet)
    elif kind == DescriptorType.DIFFERENCE:
        config = DerivedConfig("difference", children, alphabet=desc.alphabet)
    elif kind == DescriptorType.SCALE:
        config = DerivedConfig("scale", children, factor=desc.factor)
    elif kind == DescriptorType.TRANSLATE:
        config = DerivedConfig("translate", children, vector=desc.vector)
    elif kind == DescriptorType.MIRROR:
        config = DerivedConfig("mirror", children, axis=desc.axis)
    elif kind == DescriptorType.POLY_APPLY:
        config = DerivedConfig("poly_apply", children, poly=parse_poly(desc.poly, desc.dim))
    else:
        config = DerivedConfig("binarize", children, ones=desc.ones)

    if config.dimension != desc.dim:
        raise DimensionMismatchError(desc.dim, config.dimension, f"{kind.value} descriptor")
    return config


def load_descriptor(source: Union[str, Path, Dict[str, Any]]) -> Configuration:
    """Configuration from a descriptor dict, a JSON file path or JSON text."""
    try:
        if isinstance(source, dict):
            data = source
        else:
            text = str(source)
            path = Path(text)
            if not text.lstrip().startswith("{") and path.exists():
                text = path.read_text()
            data = json.loads(text)
        desc = ConfigDescriptor.model_validate(data)
    except (OSError, json.JSONDecodeError) as e:
        raise PreconditionError(f"cannot read configuration descriptor -> {str(e)}")
    config = build_config(desc)
    logger.info(f"Loaded {config.kind} (d={config.dimension}, {config.exactness_class.value})")
    return config


def describe(config: Configuration) -> ConfigDescriptor:
    """Descriptor that rebuilds an equivalent configuration."""
    d = config.dimension
    if isinstance(config, FullPeriodicConfig):
        table = [{"at": list(rep), "value": v} for rep, v in sorted(config.table.items())]
        return ConfigDescriptor(
            dim=d, type="full_periodic", basis=[list(b) for b in config.lattice.basis], table=table
        )
    if isinstance(config, FiberPeriodicConfig):
        table = [{"at": list(p), "value": v} for p, v in sorted(config.seeds.items())]
        return ConfigDescriptor(dim=d, type="fiber_periodic", period=list(config.period), table=table)
    if isinstance(config, BeattyConfig):
        a = config.alpha
        return ConfigDescriptor(
            dim=d,
            type="beatty",
            alpha={"p": a.p, "s": a.s, "q": a.q, "r": a.r},
            weights=list(config.weights),
        )
    if isinstance(config, RandomConfig):
        return ConfigDescriptor(dim=d, type="random", seed=config.seed, alphabet=list(config.values))
    if isinstance(config, DerivedConfig):
        operands = [describe(child) for child in config.children]
        fields: Dict[str, Any] = {"dim": d, "type": config.node, "operands": operands}
        if config.node in ("sum", "difference") and config.alphabet is not None:
            fields["alphabet"] = sorted(config.alphabet)
        if config.node == "scale":
            fields["factor"] = config.factor
        elif config.node == "translate":
            fields["vector"] = list(config.vector)
        elif config.node == "mirror":
            fields["axis"] = config.axis
        elif config.node == "poly_apply":
            fields["poly"] = to_text(config.poly)
        elif config.node == "binarize":
            fields["ones"] = sorted(config.ones)
        return ConfigDescriptor(**fields)
    raise PreconditionError(f"{config.kind} has no descriptor form")


def dump_descriptor(config: Configuration) -> str:
    return describe(config).model_dump_json(indent=2, exclude_none=True)
