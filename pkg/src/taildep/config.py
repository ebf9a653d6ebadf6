"""Plain-text copula config grammar, shared by the library and the CLI.

One ``key = value`` pair per line, ``#`` starts a comment, blank lines are
ignored::

    family = marshall_olkin
    a = 0.3529
    b = 0.75

Recognized families and their parameter keys:

==================== =====================
family               parameters
==================== =====================
independence         (none)
frechet_upper        (none)
marshall_olkin       a, b
mixture_mo           a, b
fgm                  alpha
generalized_clayton  gamma0, gamma1
clayton              theta
==================== =====================

``clayton`` is the built-in strict Archimedean copula; arbitrary generator
handles carry Python callables and are therefore constructible in code only.
"""

from __future__ import annotations

from taildep.copulas import (
    FGM,
    Archimedean,
    Copula,
    FrechetUpper,
    GeneralizedClayton,
    Independence,
    MarshallOlkin,
    MixtureMO,
    clayton_generator,
)
from taildep.errors import ConfigError

__all__ = ["parse_config", "copula_from_mapping", "copula_from_config",
           "FAMILY_PARAMS"]

FAMILY_PARAMS: dict[str, tuple[str, ...]] = {
    "independence": (),
    "frechet_upper": (),
    "marshall_olkin": ("a", "b"),
    "mixture_mo": ("a", "b"),
    "fgm": ("alpha",),
    "generalized_clayton": ("gamma0", "gamma1"),
    "clayton": ("theta",),
}


def parse_config(text: str) -> dict[str, str]:
    """Parse config text into a flat string mapping."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or not value:
            raise ConfigError(f"line {lineno}: empty key or value in {raw!r}")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def _to_float(key: str, value) -> float:
    if isinstance(value, (int, float)):
        return float(value)
    try:
        return float(str(value))
    except ValueError as exc:
        raise ConfigError(f"value for {key!r} is not a number: {value!r}") from exc


def copula_from_mapping(mapping: dict) -> Copula:
    """Build a copula from a parsed config mapping.

    Unknown keys and missing parameters raise :class:`ConfigError`;
    out-of-range values raise :class:`ParameterError` from the family
    constructor.
    """
    if "family" not in mapping:
        raise ConfigError("config is missing the 'family' key")
    family = str(mapping["family"]).strip().lower()
    if family not in FAMILY_PARAMS:
        known = ", ".join(sorted(FAMILY_PARAMS))
        raise ConfigError(f"unknown family {family!r}; known families: {known}")

    wanted = FAMILY_PARAMS[family]
    extra = set(mapping) - {"family", *wanted}
    if extra:
        raise ConfigError(
            f"unexpected keys for family {family!r}: {sorted(extra)}")
    missing = [k for k in wanted if k not in mapping]
    if missing:
        raise ConfigError(f"family {family!r} requires keys {missing}")

    values = {k: _to_float(k, mapping[k]) for k in wanted}
    if family == "independence":
        return Independence()
    if family == "frechet_upper":
        return FrechetUpper()
    if family == "marshall_olkin":
        return MarshallOlkin(values["a"], values["b"])
    if family == "mixture_mo":
        return MixtureMO(values["a"], values["b"])
    if family == "fgm":
        return FGM(values["alpha"])
    if family == "generalized_clayton":
        return GeneralizedClayton(values["gamma0"], values["gamma1"])
    return Archimedean(clayton_generator(values["theta"]))


def copula_from_config(text: str) -> Copula:
    """Parse config text and build the copula it describes."""
    return copula_from_mapping(parse_config(text))
