"""Spin register data model and closed-form cooling analytics.

A register is an ordered list of spins; spin 0 is the cooling target and,
by convention, the most significant bit in the computational-basis labeling
used by the state engine.  Polarizations are stored in units where the
reset spin's equilibrium polarization is 1.0, which is the normalization
used throughout the reported results: only polarization *ratios* matter to
the protocol, never absolute Boltzmann factors.

Besides the data types, this module provides the closed-form analytics
that bound or summarize a cooling run:

* ``equilibrium_polarization`` -- thermal polarization from gyromagnetic
  ratios (high-temperature limit, where polarization is proportional to
  the gyromagnetic ratio).
* ``spin_temperature`` -- effective temperature from a polarization change.
* ``information_content`` -- single-spin information content 1 - H(eps).
* ``shannon_bound`` -- maximum polarization enhancement allowed by
  conservation of total information content under unitaries.
* ``ppa_limit`` -- the partner-pairing-algorithm cooling limit for an
  n-spin register refreshed from a bath of given polarization.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

__all__ = [
    "ConfigError",
    "Role",
    "SpinSpecies",
    "Spin",
    "SpinSystem",
    "SpinTemperature",
    "ShannonBound",
    "equilibrium_polarization",
    "spin_temperature",
    "information_content",
    "information_content_quadratic",
    "shannon_bound",
    "shannon_bound_exact",
    "ppa_limit",
    "load_system",
    "load_preset",
    "preset_document",
    "preset_names",
    "GAMMA_REL",
]

LN4 = math.log(4.0)

# Gyromagnetic ratios relative to 1H.  Signs are physical; magnitudes are
# what enters polarization ratios.  These values reproduce the reference
# equilibrium polarizations (0.2515 for 13C, 0.1014 for 15N) to the digit.
GAMMA_REL = {"1H": 1.0, "13C": 0.2515, "15N": -0.1014}


class ConfigError(ValueError):
    """A system configuration document failed validation.

    ``path`` points at the offending field, e.g. ``spins[1].t1_s``.
    """

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class Role(enum.Enum):
    TARGET = "target"
    COMPUTE = "compute"
    RESET = "reset"


@dataclass(frozen=True)
class SpinSpecies:
    """A nuclear species: a name and its gyromagnetic ratio relative to 1H."""

    name: str
    gamma_rel: float

    def __post_init__(self):
        if self.gamma_rel == 0:
            raise ValueError(f"species {self.name!r}: gamma_rel must be nonzero")


@dataclass(frozen=True)
class Spin:
    """One spin of the register.

    Parameters
    ----------
    label : str
        Unique name within the system (e.g. ``"C1"``).
    species : SpinSpecies
        Nuclear species carrying the gyromagnetic ratio.
    eps_eq : float
        Equilibrium polarization, normalized so the reset spin sits at 1.0.
    t1, t2 : float
        Longitudinal and transverse relaxation times in seconds.  t2 is
        carried as metadata only: the simulated states are classical
        mixtures and never hold coherences.
    role : Role
        Target (to be cooled), compute (scratch), or reset (bath contact).
    """

    label: str
    species: SpinSpecies
    eps_eq: float
    t1: float
    t2: float
    role: Role

    def __post_init__(self):
        if abs(self.eps_eq) > 1:
            raise ValueError(f"spin {self.label!r}: |eps_eq| must be <= 1")
        if self.t1 <= 0 or self.t2 <= 0:
            raise ValueError(f"spin {self.label!r}: t1 and t2 must be positive")


@dataclass(frozen=True)
class SpinSystem:
    """Immutable ordered spin register plus bath metadata.

    Spin 0 is the most significant qubit of the basis labeling.  J couplings
    are ingested and echoed in reports but have no dynamical effect at the
    gate level.  ``compression_time_s`` is the wall-clock duration of one
    compression circuit; it contributes T1 decay in timed protocol runs.
    """

    spins: tuple[Spin, ...]
    j_couplings: tuple[tuple[int, int, float], ...] = ()
    bath_temperature: float = 303.0
    compression_time_s: float = 0.0
    name: str = ""

    def __post_init__(self):
        n = len(self.spins)
        if not 1 <= n <= 16:
            raise ValueError(f"register size {n} outside supported range 1..16")
        labels = [s.label for s in self.spins]
        if len(set(labels)) != n:
            raise ValueError("spin labels must be unique")
        if sum(s.role is Role.TARGET for s in self.spins) != 1:
            raise ValueError("system must have exactly one target spin")
        for i, j, _ in self.j_couplings:
            if not 0 <= i < j < n:
                raise ValueError(f"j_coupling indices ({i},{j}) must satisfy 0 <= i < j < n")
        if self.compression_time_s < 0:
            raise ValueError("compression_time_s must be >= 0")

    @property
    def n(self) -> int:
        return len(self.spins)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(s.label for s in self.spins)

    @property
    def eps_eq(self) -> tuple[float, ...]:
        return tuple(s.eps_eq for s in self.spins)

    @property
    def t1s(self) -> tuple[float, ...]:
        return tuple(s.t1 for s in self.spins)

    @property
    def target_index(self) -> int:
        return next(i for i, s in enumerate(self.spins) if s.role is Role.TARGET)

    @property
    def reset_indices(self) -> tuple[int, ...]:
        return tuple(i for i, s in enumerate(self.spins) if s.role is Role.RESET)

    def to_document(self) -> dict:
        """Round-trip the system back to its configuration document form."""
        return {
            "name": self.name,
            "bath_temperature_K": self.bath_temperature,
            "compression_time_s": self.compression_time_s,
            "spins": [
                {
                    "label": s.label,
                    "species": s.species.name,
                    "gamma_rel": s.species.gamma_rel,
                    "eps_eq": s.eps_eq,
                    "t1_s": s.t1,
                    "t2_s": s.t2,
                    "role": s.role.value,
                }
                for s in self.spins
            ],
            "j_couplings_hz": [
                {"i": i, "j": j, "value": v} for i, j, v in self.j_couplings
            ],
        }


def equilibrium_polarization(gamma_rel_a: float, gamma_rel_b: float, eps_b: float) -> float:
    """Thermal polarization of spin a given spin b's polarization.

    In the high-temperature limit polarization is proportional to the
    gyromagnetic ratio, so ``eps_a = eps_b * |gamma_a / gamma_b|``.
    """
    if gamma_rel_b == 0:
        raise ValueError("gamma_rel_b must be nonzero")
    if not 0 < eps_b <= 1:
        raise ValueError("eps_b must lie in (0, 1]")
    return eps_b * abs(gamma_rel_a / gamma_rel_b)


class SpinTemperature(NamedTuple):
    """Spin temperature as (magnitude, sign flag).

    Inverted populations formally correspond to a negative temperature;
    the magnitude is reported with ``negative=True`` in that case.
    """

    kelvin: float
    negative: bool

    @property
    def signed(self) -> float:
        return -self.kelvin if self.negative else self.kelvin


def spin_temperature(t_initial: float, eps_initial: float, eps_final: float) -> SpinTemperature:
    """Temperature after a polarization change, from T1*eps1 = T2*eps2.

    Raises
    ------
    ZeroDivisionError
        If ``eps_final`` is zero (infinite temperature).
    """
    if eps_final == 0:
        raise ZeroDivisionError("eps_final must be nonzero")
    t = t_initial * eps_initial / eps_final
    return SpinTemperature(abs(t), t < 0)


def information_content(eps: float) -> float:
    """Exact single-spin information content, 1 - H(eps) in bits.

    H is the binary entropy of the level populations (1 +- eps)/2.  For
    small eps this approaches eps^2/ln4 with an O(eps^4) error.
    """
    if abs(eps) > 1:
        raise ValueError("|eps| must be <= 1")
    e = abs(eps)
    if e == 1.0:
        return 1.0
    p0 = (1 + e) / 2
    p1 = (1 - e) / 2
    h = -(p0 * math.log2(p0) + (p1 * math.log2(p1) if p1 > 0 else 0.0))
    return 1.0 - h


def information_content_quadratic(eps: float) -> float:
    """Leading-order information content eps^2/ln4."""
    if abs(eps) > 1:
        raise ValueError("|eps| must be <= 1")
    return eps * eps / LN4


class ShannonBound(NamedTuple):
    """Information-conservation bound on cooling a chosen target spin.

    ``ic_sum`` is the register's total information content in units of the
    target's own quadratic information content, i.e. sum((eps_i/eps_t)^2);
    ``factor`` is the maximum enhancement eps_max/eps_eq = sqrt(ic_sum).
    """

    eps_max: float
    factor: float
    ic_sum: float


def shannon_bound(system: SpinSystem, target_index: int | None = None) -> ShannonBound:
    """Upper bound on target polarization from total information content.

    Unitaries conserve the register's total information content; dumping
    all of it onto the target and using the quadratic (small-polarization)
    form of the information content gives ``eps_max = sqrt(sum_i eps_i^2)``.
    The quadratic form is used deliberately so the quoted enhancement
    factors are comparable across registers; see ``shannon_bound_exact``
    for the entropy-exact variant.
    """
    idx = system.target_index if target_index is None else target_index
    eps = system.eps_eq
    eps_t = eps[idx]
    if eps_t == 0:
        raise ValueError("target equilibrium polarization must be nonzero")
    ic_sum = sum((e / eps_t) ** 2 for e in eps)
    factor = math.sqrt(ic_sum)
    return ShannonBound(abs(eps_t) * factor, factor, ic_sum)


def shannon_bound_exact(system: SpinSystem, target_index: int | None = None) -> ShannonBound:
    """Entropy-exact variant of :func:`shannon_bound`.

    Total information content is summed with the exact single-spin
    expression and inverted numerically for the target.  A total exceeding
    one full bit saturates at eps_max = 1.  Agrees with the quadratic
    variant in the weak-polarization regime.
    """
    idx = system.target_index if target_index is None else target_index
    eps = system.eps_eq
    eps_t = eps[idx]
    if eps_t == 0:
        raise ValueError("target equilibrium polarization must be nonzero")
    total = sum(information_content(e) for e in eps)
    if total >= 1.0:
        eps_max = 1.0
    else:
        lo, hi = 0.0, 1.0
        for _ in range(200):
            mid = (lo + hi) / 2
            if information_content(mid) < total:
                lo = mid
            else:
                hi = mid
        eps_max = (lo + hi) / 2
    factor = eps_max / abs(eps_t)
    return ShannonBound(eps_max, factor, total / information_content_quadratic(eps_t))


def ppa_limit(n: int, eps_b: float) -> float:
    """Partner-pairing cooling limit for n spins and bath polarization eps_b.

    Evaluated as tanh(2^(n-2) * atanh(eps_b)), the overflow-safe form of
    the ratio of (1 +- eps_b)^(2^(n-2)) combinations.
    """
    if n < 2:
        raise ValueError("need at least 2 spins")
    if not 0 <= eps_b <= 1:
        raise ValueError("eps_b must lie in [0, 1]")
    if eps_b == 1.0:
        return 1.0
    return math.tanh(2 ** (n - 2) * math.atanh(eps_b))


# ---------------------------------------------------------------------------
# configuration ingestion

_ROLES = {r.value: r for r in Role}


def _require(doc: dict, key: str, path: str):
    if key not in doc:
        raise ConfigError(f"{path}.{key}" if path else key, "missing required field")
    return doc[key]


def _number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(path, f"expected a number, got {type(value).__name__}")
    return float(value)


def load_system(document: dict) -> SpinSystem:
    """Build a validated :class:`SpinSystem` from a configuration document.

    The document layout is JSON-compatible::

        {
          "name": "glycine",
          "bath_temperature_K": 303.0,
          "compression_time_s": 0.302,        # optional, default 0
          "spins": [
            {"label": "C1", "gamma_rel": 0.2515, "t1_s": 20.4,
             "t2_s": 1.53, "role": "target"},  # eps_eq optional
            ...
          ],
          "j_couplings_hz": [{"i": 0, "j": 1, "value": 53.0}, ...]
        }

    A spin without an explicit ``eps_eq`` gets one computed from its
    gyromagnetic ratio relative to the first reset spin (whose own
    equilibrium polarization defaults to 1.0).  Registers with two or more
    spins must name at least one reset spin; a single-spin document is
    accepted for the limit calculators only.
    """
    if not isinstance(document, dict):
        raise ConfigError("", "configuration must be a mapping")
    name = document.get("name", "")
    bath = _number(document.get("bath_temperature_K", 303.0), "bath_temperature_K")
    if bath <= 0:
        raise ConfigError("bath_temperature_K", "must be positive")
    comp_time = _number(document.get("compression_time_s", 0.0), "compression_time_s")

    raw_spins = _require(document, "spins", "")
    if not isinstance(raw_spins, list) or not raw_spins:
        raise ConfigError("spins", "must be a non-empty list")
    if len(raw_spins) > 16:
        raise ConfigError("spins", "at most 16 spins supported")

    parsed = []
    labels = set()
    for k, entry in enumerate(raw_spins):
        path = f"spins[{k}]"
        if not isinstance(entry, dict):
            raise ConfigError(path, "must be a mapping")
        label = _require(entry, "label", path)
        if not isinstance(label, str) or not label:
            raise ConfigError(f"{path}.label", "must be a non-empty string")
        if label in labels:
            raise ConfigError(f"{path}.label", f"duplicate spin label {label!r}")
        labels.add(label)
        gamma = _number(_require(entry, "gamma_rel", path), f"{path}.gamma_rel")
        if gamma == 0:
            raise ConfigError(f"{path}.gamma_rel", "must be nonzero")
        t1 = _number(_require(entry, "t1_s", path), f"{path}.t1_s")
        t2 = _number(_require(entry, "t2_s", path), f"{path}.t2_s")
        if t1 <= 0:
            raise ConfigError(f"{path}.t1_s", "must be positive")
        if t2 <= 0:
            raise ConfigError(f"{path}.t2_s", "must be positive")
        role_raw = _require(entry, "role", path)
        role = _ROLES.get(str(role_raw).lower())
        if role is None:
            raise ConfigError(f"{path}.role", f"unknown role {role_raw!r}; expected one of {sorted(_ROLES)}")
        eps = entry.get("eps_eq")
        if eps is not None:
            eps = _number(eps, f"{path}.eps_eq")
            if abs(eps) > 1:
                raise ConfigError(f"{path}.eps_eq", "magnitude must be <= 1")
        species = entry.get("species", label)
        parsed.append((label, str(species), gamma, eps, t1, t2, role))

    roles = [p[6] for p in parsed]
    if roles.count(Role.TARGET) != 1:
        raise ConfigError("spins", "exactly one spin must have role 'target'")
    if Role.RESET not in roles and len(parsed) > 1:
        raise ConfigError("spins", "at least one spin must have role 'reset'")

    # reference for spins whose eps_eq must be derived from gamma ratios
    ref_idx = roles.index(Role.RESET) if Role.RESET in roles else 0
    eps_ref = parsed[ref_idx][3] if parsed[ref_idx][3] is not None else 1.0
    gamma_ref = parsed[ref_idx][2]

    spins = []
    for k, (label, species, gamma, eps, t1, t2, role) in enumerate(parsed):
        if eps is None:
            if eps_ref <= 0:
                raise ConfigError(f"spins[{ref_idx}].eps_eq",
                                  "reference polarization must be positive to derive eps_eq")
            eps = equilibrium_polarization(gamma, gamma_ref, eps_ref)
            if eps > 1:
                raise ConfigError(f"spins[{k}].gamma_rel", "derived eps_eq exceeds 1; give eps_eq explicitly")
        spins.append(Spin(label, SpinSpecies(species, gamma), eps, t1, t2, role))

    couplings = []
    raw_j = document.get("j_couplings_hz", [])
    if not isinstance(raw_j, list):
        raise ConfigError("j_couplings_hz", "must be a list")
    for k, entry in enumerate(raw_j):
        path = f"j_couplings_hz[{k}]"
        if not isinstance(entry, dict):
            raise ConfigError(path, "must be a mapping")
        i = _require(entry, "i", path)
        j = _require(entry, "j", path)
        v = _number(_require(entry, "value", path), f"{path}.value")
        if not (isinstance(i, int) and isinstance(j, int)):
            raise ConfigError(path, "indices must be integers")
        if not 0 <= i < j < len(spins):
            raise ConfigError(path, f"indices ({i},{j}) must satisfy 0 <= i < j < {len(spins)}")
        couplings.append((i, j, v))

    try:
        return SpinSystem(tuple(spins), tuple(couplings), bath, comp_time, str(name))
    except ValueError as exc:
        raise ConfigError("", str(exc)) from exc


# Built-in reference systems.  Relaxation times are the measured values for
# the two molecules the protocol was demonstrated on; equilibrium
# polarizations follow from the gyromagnetic ratios (reset 1H = 1.0).
_PRESETS: dict[str, dict] = {
    "glycine": {
        "name": "glycine",
        "bath_temperature_K": 303.0,
        "compression_time_s": 0.302,
        "spins": [
            {"label": "C1", "species": "13C", "gamma_rel": GAMMA_REL["13C"],
             "t1_s": 20.4, "t2_s": 1.53, "role": "target"},
            {"label": "C2", "species": "13C", "gamma_rel": GAMMA_REL["13C"],
             "t1_s": 3.23, "t2_s": 1.16, "role": "compute"},
            {"label": "H", "species": "1H", "gamma_rel": GAMMA_REL["1H"],
             "eps_eq": 1.0, "t1_s": 1.57, "t2_s": 1.0, "role": "reset"},
        ],
        "j_couplings_hz": [],
    },
    "formamide": {
        "name": "formamide",
        "bath_temperature_K": 303.0,
        "compression_time_s": 0.23,
        "spins": [
            {"label": "N", "species": "15N", "gamma_rel": GAMMA_REL["15N"],
             "t1_s": 45.35, "t2_s": 0.095, "role": "target"},
            {"label": "C", "species": "13C", "gamma_rel": GAMMA_REL["13C"],
             "t1_s": 30.40, "t2_s": 1.33, "role": "compute"},
            {"label": "H", "species": "1H", "gamma_rel": GAMMA_REL["1H"],
             "eps_eq": 1.0, "t1_s": 22.5, "t2_s": 1.15, "role": "reset"},
        ],
        "j_couplings_hz": [],
    },
}


def preset_names() -> tuple[str, ...]:
    return tuple(sorted(_PRESETS))


def preset_document(name: str) -> dict:
    """Deep copy of a built-in system configuration document."""
    import copy

    if name not in _PRESETS:
        raise ConfigError("preset", f"unknown preset {name!r}; available: {', '.join(preset_names())}")
    return copy.deepcopy(_PRESETS[name])


def load_preset(name: str) -> SpinSystem:
    return load_system(preset_document(name))
