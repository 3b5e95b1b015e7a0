"""Suite execution, JSON reports and counterexample replay."""
from __future__ import annotations

import json
import math
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Any

import numpy as np

from .checks import Ctx, run_check
from .errors import ConfigError
from .forms import FiberModel
from .scalars import get_backend
from .serialize import constant_to_json, decode, decode_args, encode, encode_args
from .suites import SUITES

SCHEMA_VERSION = 1
MAX_ATTEMPTS = 3
MAX_STORED_FAILURES = 50

__all__ = [
    "SuiteConfig",
    "VerificationReport",
    "run_suite",
    "run_all",
    "replay_failure",
    "measure_constants",
    "SCHEMA_VERSION",
]


@dataclass(frozen=True)
class SuiteConfig:
    suite: str
    n: int = 2
    rank: int = 2
    samples: int = 20
    seed: int = 0
    backend: str = "exact"
    tolerance: float = 1e-9
    report: str | None = None
    fault_inject: bool = False
    workers: int = 1

    def validate(self) -> None:
        entry = SUITES.get(self.suite)
        if entry is None:
            raise ConfigError(f"unknown suite {self.suite!r}; choose from {', '.join(sorted(SUITES))}")
        if self.n not in (1, 2, 3):
            raise ConfigError(f"n must be 1, 2 or 3, got {self.n}")
        if self.n < entry.min_n:
            raise ConfigError(
                f"suite {self.suite} needs complex dimension N = 2n >= {2 * entry.min_n}; got n = {self.n}"
            )
        if not 1 <= self.rank <= 4:
            raise ConfigError(f"rank must be 1..4, got {self.rank}")
        if self.rank < entry.min_rank:
            raise ConfigError(f"suite {self.suite} needs rank >= {entry.min_rank}")
        if self.samples < 1:
            raise ConfigError("samples must be positive")
        if self.backend not in ("exact", "float"):
            raise ConfigError(f"backend must be exact or float, got {self.backend!r}")
        if not self.tolerance > 0:
            raise ConfigError("tolerance must be positive")
        if self.workers < 1:
            raise ConfigError("workers must be positive")

    def echo(self) -> dict:
        """Config as recorded in the report (worker count excluded)."""
        d = asdict(self)
        d.pop("workers")
        return d

    def model_key(self) -> tuple:
        tol = self.tolerance if self.backend == "float" else 0.0
        return (self.n, self.backend, tol, self.fault_inject)

    def make_model(self) -> FiberModel:
        return FiberModel(self.n, get_backend(self.backend, self.tolerance), fault_inject=self.fault_inject)


@dataclass
class VerificationReport:
    suite: str
    config: dict
    passed: bool
    counts: dict
    constants: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    wall_time: float = 0.0
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, default=str)

    @classmethod
    def from_dict(cls, d: dict) -> "VerificationReport":
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in d.items() if k in names})

    @classmethod
    def from_json(cls, text: str) -> "VerificationReport":
        return cls.from_dict(json.loads(text))

    def summary_line(self) -> str:
        c = self.config
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{self.suite:<14} n={c['n']} r={c['rank']} {c['backend']:<5} {status}  "
            f"pass={self.counts['pass']} fail={self.counts['fail']} degenerate={self.counts['degenerate']}  "
            f"{self.wall_time:.2f}s"
        )


# -- sample execution -----------------------------------------------------------
_CTX_CACHE: dict[tuple, Ctx] = {}


def _ctx_for(cfg: SuiteConfig) -> Ctx:
    key = cfg.model_key()
    ctx = _CTX_CACHE.get(key)
    if ctx is None:
        ctx = Ctx.build(cfg.make_model())
        _CTX_CACHE[key] = ctx
    return ctx


def _seed_words(cfg: SuiteConfig, idx: int, attempt: int) -> list[int]:
    return [cfg.seed, zlib.crc32(cfg.suite.encode()), cfg.n, cfg.rank, idx, attempt]


def _jsonable(x: Any):
    return json.loads(json.dumps(x, sort_keys=True, default=str))


def _run_sample(cfg: SuiteConfig, idx: int) -> dict:
    ctx = _ctx_for(cfg)
    entry = SUITES[cfg.suite]
    degenerate = 0
    for attempt in range(MAX_ATTEMPTS):
        words = _seed_words(cfg, idx, attempt)
        rng = np.random.default_rng(np.random.SeedSequence(words))
        plan = entry.plan(ctx, rng, idx, cfg.rank)
        if plan.degenerate:
            degenerate += 1
            continue
        failures = []
        for name, args in plan.checks:
            ok, detail = run_check(ctx, name, **args)
            if not ok:
                failures.append(
                    {
                        "sample": idx,
                        "attempt": attempt,
                        "seed_words": words,
                        "check": name,
                        "args": encode_args(args),
                        "detail": _jsonable(detail),
                    }
                )
        return {
            "idx": idx,
            "status": "fail" if failures else "pass",
            "degenerate": degenerate,
            "failures": failures,
            "measure": plan.measure,
            "keep": {k: encode(v) for k, v in plan.keep.items()},
        }
    return {"idx": idx, "status": "degenerate", "degenerate": degenerate, "failures": [], "measure": {}, "keep": {}}


def _run_chunk(cfg: SuiteConfig, idxs: list[int]) -> list[dict]:
    return [_run_sample(cfg, i) for i in idxs]


def _run_samples(cfg: SuiteConfig) -> list[dict]:
    idxs = list(range(cfg.samples))
    if cfg.workers <= 1 or cfg.samples < 2:
        return [_run_sample(cfg, i) for i in idxs]
    chunks = [idxs[w :: cfg.workers] for w in range(cfg.workers)]
    out: list[dict] = []
    with ProcessPoolExecutor(max_workers=cfg.workers) as ex:
        for res in ex.map(_run_chunk, [cfg] * len(chunks), chunks):
            out.extend(res)
    out.sort(key=lambda r: r["idx"])
    return out


# -- suite-level aggregation ----------------------------------------------------------
def _consistency(cfg, ctx, outcomes, key, check_name, arg_names, keep_key) -> tuple[Any, list]:
    """First measured value of ``key`` and failures for samples that disagree with it."""
    bk = ctx.model.backend
    measured = [o for o in outcomes if key in o["measure"]]
    if not measured:
        return None, []
    ref = measured[0]
    v0 = ref["measure"][key]
    failures = []
    for o in measured[1:]:
        v = o["measure"][key]
        if bk.eq(v, v0, abs(complex(v0))):
            continue
        args = {
            arg_names[0]: decode(ctx.model, ref["keep"][keep_key]),
            arg_names[1]: decode(ctx.model, o["keep"][keep_key]),
        }
        ok, detail = run_check(ctx, check_name, **args)
        failures.append(
            {
                "sample": o["idx"],
                "attempt": None,
                "seed_words": None,
                "check": check_name,
                "args": encode_args(args),
                "detail": _jsonable(detail),
            }
        )
    return v0, failures


def _finalize(cfg: SuiteConfig, ctx: Ctx, outcomes: list[dict]) -> tuple[dict, list]:
    constants: dict = {}
    failures: list = []
    N = ctx.model.N
    if cfg.suite == "lemma74":
        r = ctx.kd.e_form()
        constants["c_n"] = constant_to_json(r.c_n)
        constants[f"c_{cfg.n}"] = constants["c_n"]
        v0, fails = _consistency(cfg, ctx, outcomes, "lemma74_constant", "lemma74_constant_equal", ("eta_a", "eta_b"), "eta")
        constants["degree_identity_constant"] = constant_to_json(v0)
        if v0 is not None:
            constants["constant_times_c_n_squared"] = constant_to_json(v0 * r.c_n * r.c_n)
        constants["power_of_two_reference"] = 2 ** (cfg.n - 1)
        failures += fails
    elif cfg.suite == "hodge_riemann":
        v0, fails = _consistency(cfg, ctx, outcomes, "ratio", "hr_ratio_equal", ("theta_a", "theta_b"), "theta")
        constants["ratio"] = constant_to_json(v0)
        constants["expected_value"] = f"1/{4 * (N * N - N)}"
        if v0 is not None:
            constants["convention_constant"] = constant_to_json(v0 * (4 * (N * N - N)))
        constants["factorial_N_minus_2"] = math.factorial(N - 2)
        failures += fails
    elif cfg.suite == "sec9":
        constants["c1_scale"] = "1/(2*pi)"
        constants["disc_scale"] = "1/(4*pi^2)"
    elif cfg.suite == "lemma52":
        ratios = [
            f["detail"].get("discrepancy_ratio")
            for o in outcomes
            for f in o["failures"]
            if f["check"] == "b_formula" and "discrepancy_ratio" in f["detail"]
        ]
        constants["b_direct_over_formula"] = ratios[0] if ratios else 1
    return constants, failures


def run_suite(cfg: SuiteConfig) -> VerificationReport:
    """Run one suite deterministically for ``(seed, samples)``."""
    cfg.validate()
    t0 = time.perf_counter()
    ctx = _ctx_for(cfg)
    outcomes = _run_samples(cfg)
    counts = {"pass": 0, "fail": 0, "degenerate": 0}
    failures: list = []
    for o in outcomes:
        counts["degenerate"] += o["degenerate"]
        if o["status"] != "degenerate":
            counts[o["status"]] += 1
        failures.extend(o["failures"])
    constants, extra = _finalize(cfg, ctx, outcomes)
    if extra:
        counts["fail"] += len(extra)
        failures.extend(extra)
    report = VerificationReport(
        suite=cfg.suite,
        config=cfg.echo(),
        passed=not failures,
        counts=counts,
        constants=constants,
        failures=failures[:MAX_STORED_FAILURES],
        wall_time=round(time.perf_counter() - t0, 3),
    )
    if cfg.report:
        _write(cfg.report, report.to_json())
    return report


def _write(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    except OSError as exc:
        raise ConfigError(f"cannot write report to {path}: {exc}") from exc


def run_all(base: SuiteConfig) -> dict:
    """Every suite over the supported ``(n, rank)`` grid; failures do not stop the run."""
    t0 = time.perf_counter()
    reports = []
    for name in sorted(SUITES):
        entry = SUITES[name]
        ranks = entry.ranks or (base.rank,)
        for n in (1, 2, 3):
            if n < entry.min_n:
                continue
            for r in ranks:
                if r < entry.min_rank:
                    continue
                cfg = replace(base, suite=name, n=n, rank=r, report=None)
                try:
                    rep = run_suite(cfg)
                except Exception as exc:
                    rep = VerificationReport(
                        suite=name,
                        config=cfg.echo(),
                        passed=False,
                        counts={"pass": 0, "fail": 1, "degenerate": 0},
                        failures=[{"check": "suite_error", "detail": {"error": f"{type(exc).__name__}: {exc}"}}],
                    )
                reports.append(rep)
    summary = {
        "schema_version": SCHEMA_VERSION,
        "kind": "summary",
        "config": replace(base, suite="all").echo(),
        "passed": all(r.passed for r in reports),
        "reports": [r.to_dict() for r in reports],
        "wall_time": round(time.perf_counter() - t0, 3),
    }
    if base.report:
        _write(base.report, json.dumps(summary, sort_keys=True, indent=2, default=str))
    return summary


def config_from_echo(d: dict) -> SuiteConfig:
    names = {f.name for f in fields(SuiteConfig)}
    return SuiteConfig(**{k: v for k, v in d.items() if k in names})


def replay_failure(failure: dict, config: dict) -> tuple[bool, dict]:
    """Re-run a serialized failing check; returns ``(ok, detail)`` (``ok`` False reproduces it)."""
    cfg = config_from_echo(config)
    ctx = Ctx.build(cfg.make_model())
    args = decode_args(ctx.model, failure["args"])
    return run_check(ctx, failure["check"], **args)


def measure_constants(backend: str = "exact", samples: int = 5, seed: int = 0, rank: int = 2) -> dict:
    """c_n, the degree-identity constant and the Hodge-Riemann ratio for n = 1, 2, 3."""
    rows = []
    for n in (1, 2, 3):
        r74 = run_suite(SuiteConfig("lemma74", n=n, samples=samples, seed=seed, backend=backend))
        rhr = run_suite(SuiteConfig("hodge_riemann", n=n, rank=rank, samples=samples, seed=seed, backend=backend))
        rows.append(
            {
                "n": n,
                "N": 2 * n,
                "c_n": r74.constants.get("c_n"),
                "degree_identity_constant": r74.constants.get("degree_identity_constant"),
                "power_of_two_reference": r74.constants.get("power_of_two_reference"),
                "hr_ratio": rhr.constants.get("ratio"),
                "hr_expected_value": rhr.constants.get("expected_value"),
                "hr_convention_constant": rhr.constants.get("convention_constant"),
                "passed": r74.passed and rhr.passed,
            }
        )
    return {"schema_version": SCHEMA_VERSION, "kind": "constants", "backend": backend, "rows": rows}
