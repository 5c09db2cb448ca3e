"""Run specification parsing for the command line tools.

Configs are YAML documents (plain JSON is valid YAML and works too).
Complex entries are written as ``[re, im]`` pairs; bare numbers are taken
as real.  Parsing is fail-fast: every family, basis and state is built
and validated here, so a spec that parses cleanly cannot blow up later
in the run.  Errors carry the offending field path.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass

import numpy as np
import yaml

from .bell import BellFamily, make_bell_family
from .effects import EffectOperator, kraus_mixture, unitary_effect
from .linalg import as_complex_matrix, frozen_complex_array, is_unitary
from .sampling import random_state

NORM_WARN_TOL = 1e-9


class ConfigError(ValueError):
    """Invalid run specification; the message names the field."""


@dataclass(frozen=True, eq=False)
class EavesdropSpec:
    """Tap settings: measurement basis plus one strength or a sweep grid."""

    basis: np.ndarray
    theta: float | None
    sweep: tuple[float, float, int] | None


@dataclass(frozen=True, eq=False)
class RunSpec:
    """Everything one CLI invocation needs, fully validated."""

    n: int
    seed: int
    u0: np.ndarray
    bell: BellFamily
    input_state: np.ndarray
    input_label: str
    eavesdrop: EavesdropSpec | None
    effect_b: EffectOperator | tuple[EffectOperator, ...] | None
    distinguish: tuple[tuple[str, np.ndarray], tuple[str, np.ndarray]]
    output_path: str | None


def parse_config(text: str, strict: bool = False) -> RunSpec:
    """Parse and validate a YAML/JSON run specification."""
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"document: not valid YAML/JSON ({exc})") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"document: expected a mapping, got {type(raw).__name__}")
    known = {"n", "seed", "u0", "bell", "input", "eavesdrop", "effect_b", "distinguish", "output"}
    for key in raw:
        if key not in known:
            raise ConfigError(f"{key}: unknown field (expected one of {sorted(known)})")

    n = _require_int(raw, "n", minimum=2)
    if n > 32:
        raise ConfigError(f"n: dimension {n} exceeds the supported maximum of 32")
    seed = _require_int(raw, "seed", minimum=0, default=0)

    u0_raw = raw.get("u0", "identity")
    if u0_raw == "identity":
        u0 = np.eye(n, dtype=complex)
    else:
        u0 = _parse_matrix(u0_raw, "u0", n)
        if not is_unitary(u0):
            raise ConfigError("u0: matrix is not unitary")

    bell = _parse_bell(raw.get("bell", "weyl"), n)

    if "input" not in raw:
        raise ConfigError("input: field is required")
    input_label, input_state = _parse_state(raw["input"], "input", n, strict)

    eavesdrop = _parse_eavesdrop(raw.get("eavesdrop"), n)
    effect_b = _parse_effect_b(raw.get("effect_b"), n)
    distinguish = _parse_distinguish(raw.get("distinguish"), n, strict)

    output_path = raw.get("output")
    if output_path is not None and not isinstance(output_path, str):
        raise ConfigError(f"output: expected a path string, got {type(output_path).__name__}")

    return RunSpec(
        n=n,
        seed=seed,
        u0=frozen_complex_array(u0),
        bell=bell,
        input_state=frozen_complex_array(input_state),
        input_label=input_label,
        eavesdrop=eavesdrop,
        effect_b=effect_b,
        distinguish=distinguish,
        output_path=output_path,
    )


def load_config(path: str, strict: bool = False) -> RunSpec:
    """Read and parse a config file."""
    with open(path, "r", encoding="utf-8") as handle:
        return parse_config(handle.read(), strict=strict)


def _require_int(raw: dict, key: str, minimum: int, default: int | None = None) -> int:
    if key not in raw:
        if default is not None:
            return default
        raise ConfigError(f"{key}: field is required")
    value = raw[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{key}: expected an integer, got {value!r}")
    if value < minimum:
        raise ConfigError(f"{key}: must be at least {minimum}, got {value}")
    return value


def _parse_complex(value: object, path: str) -> complex:
    if isinstance(value, bool):
        raise ConfigError(f"{path}: expected a number or [re, im] pair, got {value!r}")
    if isinstance(value, (int, float)):
        return complex(value, 0.0)
    if isinstance(value, list) and len(value) == 2 and all(
        isinstance(part, (int, float)) and not isinstance(part, bool) for part in value
    ):
        return complex(value[0], value[1])
    raise ConfigError(f"{path}: expected a number or [re, im] pair, got {value!r}")


def _parse_matrix(value: object, path: str, n: int) -> np.ndarray:
    if not isinstance(value, list) or len(value) != n:
        raise ConfigError(f"{path}: expected {n} rows")
    rows = []
    for i, row in enumerate(value):
        if not isinstance(row, list) or len(row) != n:
            raise ConfigError(f"{path}[{i}]: expected {n} entries")
        rows.append([_parse_complex(entry, f"{path}[{i}][{j}]") for j, entry in enumerate(row)])
    return as_complex_matrix(rows)


def _parse_state(value: object, path: str, n: int, strict: bool) -> tuple[str, np.ndarray]:
    if isinstance(value, str):
        if value == "plus-uniform":
            return value, np.full(n, 1.0 / np.sqrt(n), dtype=complex)
        if value.startswith("basis:"):
            try:
                index = int(value.split(":", 1)[1])
            except ValueError:
                raise ConfigError(f"{path}: malformed basis index in {value!r}") from None
            if not 0 <= index < n:
                raise ConfigError(f"{path}: basis index {index} out of range for n={n}")
            state = np.zeros(n, dtype=complex)
            state[index] = 1.0
            return value, state
        if value.startswith("random:"):
            try:
                state_seed = int(value.split(":", 1)[1])
            except ValueError:
                raise ConfigError(f"{path}: malformed seed in {value!r}") from None
            return value, random_state(n, np.random.default_rng(state_seed))
        raise ConfigError(
            f"{path}: unknown state name {value!r} "
            "(expected 'plus-uniform', 'basis:K', 'random:SEED' or an amplitude list)"
        )
    if isinstance(value, list):
        if len(value) != n:
            raise ConfigError(f"{path}: expected {n} amplitudes, got {len(value)}")
        amps = np.array(
            [_parse_complex(entry, f"{path}[{i}]") for i, entry in enumerate(value)]
        )
        norm_sq = float(np.vdot(amps, amps).real)
        if norm_sq <= 0.0:
            raise ConfigError(f"{path}: amplitudes are all zero")
        if abs(norm_sq - 1.0) > NORM_WARN_TOL:
            if strict:
                raise ConfigError(
                    f"{path}: state norm^2 is {norm_sq:.6g}, not 1 (strict mode rejects this)"
                )
            print(
                f"note: normalizing {path} (norm^2 was {norm_sq:.6g})",
                file=sys.stderr,
            )
            amps = amps / np.sqrt(norm_sq)
        return "explicit", amps
    raise ConfigError(f"{path}: expected a state name or amplitude list, got {value!r}")


def _parse_bell(value: object, n: int) -> BellFamily:
    if value == "weyl":
        return make_bell_family(n)
    if not isinstance(value, list):
        raise ConfigError("bell: expected 'weyl' or a list of outcomes")
    outcomes = []
    for i, item in enumerate(value):
        if not isinstance(item, dict) or "unitary" not in item:
            raise ConfigError(f"bell[{i}]: expected a mapping with 'unitary' (and optional 'weight')")
        extra = set(item) - {"unitary", "weight"}
        if extra:
            raise ConfigError(f"bell[{i}]: unknown fields {sorted(extra)}")
        unitary = _parse_matrix(item["unitary"], f"bell[{i}].unitary", n)
        weight = item.get("weight", 1.0)
        if isinstance(weight, bool) or not isinstance(weight, (int, float)) or weight <= 0:
            raise ConfigError(f"bell[{i}].weight: expected a positive number, got {weight!r}")
        outcomes.append((i, unitary, float(weight)))
    try:
        return make_bell_family(n, outcomes)
    except ValueError as exc:
        raise ConfigError(f"bell: {exc}") from exc


def _parse_basis(value: object, n: int) -> np.ndarray:
    if value in (None, "computational"):
        return np.eye(n, dtype=complex)
    if value == "fourier":
        jk = np.outer(np.arange(n), np.arange(n))
        return np.exp(2j * np.pi * jk / n) / np.sqrt(n)
    basis = _parse_matrix(value, "eavesdrop.basis", n)
    if not is_unitary(basis):
        raise ConfigError("eavesdrop.basis: columns do not form a unitary matrix")
    return basis


def _parse_eavesdrop(value: object, n: int) -> EavesdropSpec | None:
    if value is None:
        return None
    if not isinstance(value, dict):
        raise ConfigError("eavesdrop: expected a mapping")
    extra = set(value) - {"basis", "theta", "theta_sweep"}
    if extra:
        raise ConfigError(f"eavesdrop: unknown fields {sorted(extra)}")
    basis = _parse_basis(value.get("basis"), n)
    has_theta = "theta" in value
    has_sweep = "theta_sweep" in value
    if has_theta == has_sweep:
        raise ConfigError("eavesdrop: exactly one of 'theta' or 'theta_sweep' is required")
    if has_theta:
        theta = value["theta"]
        if isinstance(theta, bool) or not isinstance(theta, (int, float)):
            raise ConfigError(f"eavesdrop.theta: expected a number, got {theta!r}")
        if not 0.0 <= float(theta) <= 1.0:
            raise ConfigError(f"eavesdrop.theta: must lie in [0, 1], got {theta}")
        return EavesdropSpec(basis=frozen_complex_array(basis), theta=float(theta), sweep=None)
    sweep = value["theta_sweep"]
    if (
        not isinstance(sweep, list)
        or len(sweep) != 3
        or any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in sweep[:2])
        or isinstance(sweep[2], bool)
        or not isinstance(sweep[2], int)
    ):
        raise ConfigError("eavesdrop.theta_sweep: expected [start, stop, steps]")
    start, stop, steps = float(sweep[0]), float(sweep[1]), int(sweep[2])
    if not (0.0 <= start <= 1.0 and 0.0 <= stop <= 1.0):
        raise ConfigError("eavesdrop.theta_sweep: start and stop must lie in [0, 1]")
    if steps < 2:
        raise ConfigError(f"eavesdrop.theta_sweep: need at least 2 steps, got {steps}")
    return EavesdropSpec(basis=frozen_complex_array(basis), theta=None, sweep=(start, stop, steps))


def _parse_effect_b(
    value: object, n: int
) -> EffectOperator | tuple[EffectOperator, ...] | None:
    if value is None:
        return None
    if not isinstance(value, dict):
        raise ConfigError("effect_b: expected a mapping with 'unitary' or 'kraus'")
    extra = set(value) - {"unitary", "kraus"}
    if extra:
        raise ConfigError(f"effect_b: unknown fields {sorted(extra)}")
    if ("unitary" in value) == ("kraus" in value):
        raise ConfigError("effect_b: exactly one of 'unitary' or 'kraus' is required")
    if "unitary" in value:
        matrix = _parse_matrix(value["unitary"], "effect_b.unitary", n)
        try:
            return unitary_effect(matrix)
        except ValueError as exc:
            raise ConfigError(f"effect_b.unitary: {exc}") from exc
    kraus_raw = value["kraus"]
    if not isinstance(kraus_raw, list) or not kraus_raw:
        raise ConfigError("effect_b.kraus: expected a non-empty list of matrices")
    mats = [
        _parse_matrix(item, f"effect_b.kraus[{i}]", n) for i, item in enumerate(kraus_raw)
    ]
    try:
        return kraus_mixture(mats)
    except ValueError as exc:
        raise ConfigError(f"effect_b.kraus: {exc}") from exc


def _parse_distinguish(
    value: object, n: int, strict: bool
) -> tuple[tuple[str, np.ndarray], tuple[str, np.ndarray]]:
    if value is None:
        if n < 2:
            raise ConfigError("distinguish: cannot default for n < 2")
        first = np.zeros(n, dtype=complex)
        first[0] = 1.0
        second = np.zeros(n, dtype=complex)
        second[1] = 1.0
        return (("basis:0", frozen_complex_array(first)), ("basis:1", frozen_complex_array(second)))
    if not isinstance(value, list) or len(value) != 2:
        raise ConfigError("distinguish: expected a list of exactly two input states")
    parsed = []
    for i, item in enumerate(value):
        label, state = _parse_state(item, f"distinguish[{i}]", n, strict)
        parsed.append((label, frozen_complex_array(state)))
    return (parsed[0], parsed[1])
