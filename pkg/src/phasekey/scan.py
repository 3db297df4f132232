"""Parameter points, sweeps and their flat ``key = value`` config files."""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__, _kernels
from .errors import DomainError
from .fock import DEFAULT_EPSILON, choose_truncation
from .infotheory import (
    CapacityParams,
    capacity_coherent,
    capacity_photon_number,
    mutual_information,
)
from .noise import OUNoise, StaticNoise
from .oracle import q_by_monte_carlo
from .receiver import BinConvention, OutcomeDistribution, ReceiverKind, outcome_distribution

# flag name -> (python type, default)
PARAMETERS = {
    "n": (int, 20),
    "nbar": (float, 1.0),
    "tau": (float, 0.0),
    "lambda": (float, 1.0),
    "tau-e": (float, 1.0),
    "delta": (float, 0.0),
    "eta": (float, 1.0),
    "bin-offset": (float, 0.0),
}
OU_PARAMETERS = ("lambda", "tau-e", "delta")
SETTINGS = {
    "receiver": (str, "both"),
    "noise": (str, "static"),
    "epsilon": (float, DEFAULT_EPSILON),
    "format": (str, "csv"),
    "output": (str, None),
    "seed": (int, 0),
    "samples": (int, None),
    "jobs": (int, 1),
}
RECEIVER_CHOICES = ("canonical", "husimi-q", "both")
NOISE_CHOICES = ("static", "ou")


class ConfigError(ValueError):
    """Malformed scan configuration text."""


def receivers_for(choice: str):
    if choice == "both":
        return (ReceiverKind.CANONICAL, ReceiverKind.HUSIMI_Q)
    return (ReceiverKind.parse(choice),)


def make_noise(kind: str, params: dict):
    if kind == "static":
        return StaticNoise()
    if kind == "ou":
        return OUNoise(params["lambda"], params["tau-e"], params["delta"])
    raise DomainError(f"unknown noise model {kind!r}")


def _mi_column(kind: ReceiverKind) -> str:
    return "I_C" if kind is ReceiverKind.CANONICAL else "I_Q"


def evaluate_point(params: dict, receiver="both", noise="static", epsilon=DEFAULT_EPSILON,
                   samples=None, seed=None, capacities=False) -> dict:
    """One output row. ``params`` holds every entry of :data:`PARAMETERS`."""
    N = int(params["n"])
    nbar = float(params["nbar"])
    tau = float(params["tau"])
    noise_model = make_noise(noise, params)
    sigma = noise_model.sigma(tau)
    convention = BinConvention(float(params["bin-offset"]))
    trunc = choose_truncation(nbar, epsilon)

    row = {"n": N, "nbar": nbar, "noise": noise, "tau": tau}
    if noise == "ou":
        row.update({k: float(params[k]) for k in OU_PARAMETERS})
    row["bin-offset"] = convention.fraction
    row["sigma"] = sigma

    bits = {}
    for kind in receivers_for(receiver):
        dist = outcome_distribution(kind, nbar, N, sigma, trunc, convention)
        bits[kind] = mutual_information(dist).bits
        row[_mi_column(kind)] = bits[kind]
        if samples:
            run = q_by_monte_carlo(nbar, N, noise_model, tau, kind, samples, seed, convention)
            mc = OutcomeDistribution(run.estimate, kind, nbar, sigma, convention, source="monte-carlo")
            row[_mi_column(kind) + "_mc"] = mutual_information(mc).bits
    if samples:
        row["seed"] = seed

    if capacities:
        cap = CapacityParams(float(params["eta"]), nbar)
        c_coh = capacity_coherent(cap)
        c_phn = capacity_photon_number(nbar)
        row.update({"eta": cap.eta, "C_COH": c_coh, "C_PHN": c_phn})
        for kind, value in bits.items():
            suffix = "c" if kind is ReceiverKind.CANONICAL else "q"
            row[f"gamma_{suffix}"] = value / c_phn if c_phn > 0 else None
            row[f"beta_{suffix}"] = value / c_coh if c_coh > 0 else None
    return row


def parse_values(name: str, text: str) -> tuple:
    """``start:stop:count`` (inclusive linspace) or a comma-separated list."""
    cast = PARAMETERS[name][0] if name in PARAMETERS else None
    if cast is None:
        raise ConfigError(f"{name!r} cannot be swept")
    text = text.strip()
    try:
        if ":" in text:
            start, stop, count = text.split(":")
            count = int(count)
            if count < 1:
                raise ConfigError(f"sweep over {name} needs at least one point")
            values = np.linspace(float(start), float(stop), count)
            values = [cast(round(v)) if cast is int else float(v) for v in values]
        else:
            values = [cast(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad sweep values for {name}: {text!r}") from exc
    if not values:
        raise ConfigError(f"sweep over {name} is empty")
    return tuple(values)


def _format_values(values) -> str:
    return ",".join(repr(v) for v in values)


@dataclass(frozen=True)
class ScanSpec:
    fixed: dict = field(default_factory=dict)
    sweeps: tuple = ()  # ((name, (v0, v1, ...)), ...) slowest axis first
    settings: dict = field(default_factory=dict)

    def __post_init__(self):
        names = [n for n, _ in self.sweeps]
        if len(set(names)) != len(names):
            raise ConfigError("a parameter is swept twice")
        for name, values in self.sweeps:
            if name not in PARAMETERS:
                raise ConfigError(f"{name!r} cannot be swept")
            if not values:
                raise ConfigError(f"sweep over {name} is empty")
        setting = self.setting
        if setting("receiver") not in RECEIVER_CHOICES:
            raise ConfigError(f"receiver must be one of {RECEIVER_CHOICES}")
        if setting("noise") not in NOISE_CHOICES:
            raise ConfigError(f"noise must be one of {NOISE_CHOICES}")
        if setting("format") not in ("csv", "json"):
            raise ConfigError("format must be csv or json")
        touched = set(self.fixed) | set(names)
        if setting("noise") == "static" and touched & set(OU_PARAMETERS):
            raise ConfigError("lambda, tau-e and delta only apply to --noise ou")

    def setting(self, key):
        return self.settings.get(key, SETTINGS[key][1])

    def value(self, key):
        return self.fixed.get(key, PARAMETERS[key][1])

    def points(self):
        names = [n for n, _ in self.sweeps]
        base = {k: self.value(k) for k in PARAMETERS}
        for combo in itertools.product(*(v for _, v in self.sweeps)):
            yield {**base, **dict(zip(names, combo))}

    def __len__(self):
        return math.prod(len(v) for _, v in self.sweeps)

    def to_config(self) -> dict:
        cfg = {k: repr(v) if isinstance(v, float) else str(v) for k, v in self.fixed.items()}
        cfg.update({k: str(v) for k, v in self.settings.items() if v is not None})
        cfg.update({f"sweep.{n}": _format_values(v) for n, v in self.sweeps})
        return cfg

    def meta(self) -> dict:
        meta = {
            "version": __version__,
            "command": "scan",
            "epsilon": self.setting("epsilon"),
            "bin_offset": self.value("bin-offset"),
            "backend": _kernels.BACKEND,
            "config": self.to_config(),
        }
        if self.setting("samples"):
            meta["seed"] = self.setting("seed")
        return meta


def _cast_setting(key, text):
    cast = SETTINGS[key][0]
    try:
        return cast(text)
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {text!r}") from exc


def spec_from_mapping(mapping: dict) -> ScanSpec:
    """Build a spec from flag-style keys; ``sweep.<name>`` entries become axes."""
    fixed, sweeps, settings = {}, [], {}
    for key, raw in mapping.items():
        text = str(raw).strip()
        if key.startswith("sweep."):
            name = key[len("sweep."):]
            sweeps.append((name, parse_values(name, text)))
        elif key in PARAMETERS:
            try:
                fixed[key] = PARAMETERS[key][0](text)
            except ValueError as exc:
                raise ConfigError(f"bad value for {key}: {text!r}") from exc
        elif key in SETTINGS:
            settings[key] = _cast_setting(key, text)
        else:
            raise ConfigError(f"unknown key {key!r}")
    for name, _ in sweeps:
        fixed.pop(name, None)
    return ScanSpec(fixed, tuple(sweeps), settings)


def parse_config(text: str) -> dict:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    mapping = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or not key or not value.strip():
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        if key in mapping:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        mapping[key] = value.strip()
    return mapping


def format_config(mapping: dict) -> str:
    return "".join(f"{k} = {v}\n" for k, v in mapping.items())


def _evaluate(args):
    params, spec, index = args
    samples = spec.setting("samples")
    seed = None
    if samples:
        seed = int(np.random.SeedSequence([spec.setting("seed"), index]).generate_state(1)[0])
    return evaluate_point(
        params, spec.setting("receiver"), spec.setting("noise"), spec.setting("epsilon"),
        samples, seed, capacities=True,
    )


def run_scan(spec: ScanSpec, jobs: int | None = None) -> list[dict]:
    """Evaluate every point; rows come back in sweep order whatever ``jobs`` is."""
    jobs = spec.setting("jobs") if jobs is None else jobs
    tasks = [(p, spec, i) for i, p in enumerate(spec.points())]
    if jobs <= 1 or len(tasks) <= 1:
        return [_evaluate(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_evaluate, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
