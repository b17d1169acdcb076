"""Command line entry point: ``bwspinor {verify,frame,transform,norm}``.

Input grammar
    four-vector   ``t,x,y,z`` (comma-separated reals)
    complex       ``re``, ``im i`` or ``re+im i`` without spaces, e.g. ``1``, ``-2i``, ``0.5-1e-3i``
    spinor        two comma-separated complex numbers, e.g. ``1,0`` or ``0.3+1i,1``
    matrix        four comma-separated complex numbers in row-major order

Exit codes: 0 all checks pass, 1 check failure or diagnostic, 2 usage or
configuration error.
"""
from __future__ import annotations

import argparse
import math
import os
import re
import sys
import time

import numpy as np

from . import checks
from .errors import SpinorError
from .frames import massive_spin_frame, massless_spin_frame
from .massive import apply_passive, bw_norm, bw_transform_matrix
from .massless import apply_passive_massless, massless_norm, massless_phase_factor
from .quadrature import RNG_ALGORITHM, Wavepacket, make_gaussian_field, make_massless_gaussian
from .spinors import SL2C, sl2c_to_lorentz, apply_lorentz

SEED_ENV = "BWSPINOR_SEED"
REPORT_FORMAT = "bwspinor-report/1"

_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?|inf|nan"
_COMPLEX = re.compile(rf"^(?:(?P<re>[+-]?(?:{_NUM}))(?P<im>[+-](?:{_NUM})?i)?|(?P<pure>[+-]?(?:{_NUM})?i))$")


class UsageError(Exception):
    """Bad command line or configuration input (exit code 2)."""


# -- parsing and formatting ---------------------------------------------------

def _imag_part(text: str) -> float:
    body = text[:-1]
    if body in ("", "+"):
        return 1.0
    if body == "-":
        return -1.0
    return float(body)


def parse_complex(text: str) -> complex:
    """Parse ``re``, ``im i`` or ``re+im i``."""
    text = text.strip()
    m = _COMPLEX.match(text)
    if not m:
        raise UsageError(f"not a complex number: {text!r} (expected forms like 1, 2i, 1.5-0.5i)")
    if m.group("pure") is not None:
        return complex(0.0, _imag_part(m.group("pure")))
    im = m.group("im")
    return complex(float(m.group("re")), _imag_part(im) if im else 0.0)


def format_complex(z: complex) -> str:
    """Round-trippable ``re+im i`` text for a complex number."""
    z = complex(z)
    im = z.imag
    sign = "-" if math.copysign(1.0, im) < 0 else "+"
    return f"{z.real!r}{sign}{abs(im)!r}i"


def parse_reals(text: str, count: int | None = None, what: str = "vector") -> np.ndarray:
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"{what} must be comma-separated reals, got {text!r}") from None
    if count is not None and len(vals) != count:
        raise UsageError(f"{what} needs {count} components, got {len(vals)}")
    return np.array(vals)


def parse_complexes(text: str, count: int | None = None, what: str = "spinor") -> np.ndarray:
    vals = [parse_complex(x) for x in text.split(",")]
    if count is not None and len(vals) != count:
        raise UsageError(f"{what} needs {count} components, got {len(vals)}")
    return np.array(vals, dtype=complex)


def parse_ints(text: str, what: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"{what} must be comma-separated integers, got {text!r}") from None


def _fmt_spinor(v) -> str:
    return "(" + ", ".join(format_complex(c) for c in np.ravel(v)) + ")"


def read_config(path: str) -> dict:
    """``key=value`` lines; ``#`` starts a comment; keys use the long flag names."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    for num, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{num}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("_", "-")
        if key not in _VERIFY_KEYS:
            raise UsageError(f"{path}:{num}: unknown key {key!r}")
        out[key] = value
    return out


_VERIFY_KEYS = ("suite", "seed", "trials", "mc-samples", "tol", "mass", "spin", "rapidity-max", "report")


def _convert(key: str, value: str):
    try:
        if key in ("seed", "trials", "mc-samples"):
            return int(value)
        if key in ("tol", "rapidity-max"):
            return float(value)
    except ValueError:
        raise UsageError(f"{key} has an invalid value {value!r}") from None
    if key == "mass":
        return tuple(parse_reals(value, what="mass list"))
    if key == "spin":
        return parse_ints(value, "spin list")
    return value


def build_config(args) -> tuple[checks.SuiteConfig, str]:
    """Merge defaults, environment seed, config file and flags (in rising priority)."""
    merged = {}
    seed_source = "default"
    env_seed = os.environ.get(SEED_ENV)
    if env_seed is not None:
        merged["seed"] = env_seed
        seed_source = f"env:{SEED_ENV}"
    if args.config:
        from_file = read_config(args.config)
        if "seed" in from_file:
            seed_source = "config"
        merged.update(from_file)
    for key in _VERIFY_KEYS:
        value = getattr(args, key.replace("-", "_"))
        if value is not None:
            merged[key] = value
            if key == "seed":
                seed_source = "flag"
    values = {k: _convert(k, str(v)) for k, v in merged.items()}
    suite = values.pop("suite", "all")
    if suite not in checks.SUITES + ("all",):
        raise UsageError(f"unknown suite {suite!r}")
    cfg = checks.SuiteConfig(seed_source=seed_source)
    mapping = {"seed": "seed", "trials": "trials", "mc-samples": "mc_samples", "tol": "tol", "mass": "masses",
               "spin": "spins", "rapidity-max": "rapidity_max", "report": "report"}
    for key, value in values.items():
        setattr(cfg, mapping[key], value)
    if cfg.seed < 0:
        raise UsageError("seed must be nonnegative")
    try:
        cfg.validate()
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return cfg, suite


# -- reports -------------------------------------------------------------------

def _run_fields(cfg: checks.SuiteConfig, suite: str) -> list[tuple[str, str]]:
    return [
        ("suite", suite),
        ("seed", str(cfg.seed)),
        ("seed_source", cfg.seed_source),
        ("rng", RNG_ALGORITHM),
        ("trials", str(cfg.trials)),
        ("mc_samples", str(cfg.mc_samples)),
        ("tol", "default" if cfg.tol is None else repr(cfg.tol)),
        ("masses", ",".join(repr(float(m)) for m in cfg.masses)),
        ("spins", ",".join(str(n) for n in cfg.spins)),
        ("rapidity_max", repr(float(cfg.rapidity_max))),
    ]


def structured_report(cfg, suite, results, total_runtime) -> str:
    lines = [f"format={REPORT_FORMAT}", "[run]"]
    lines += [f"{k}={v}" for k, v in _run_fields(cfg, suite)]
    for r in results:
        lines += [
            "[check]",
            f"name={r.name}",
            f"anchor={r.anchor}",
            f"kind={r.kind}",
            f"trials={r.trials}",
            f"max_residual={r.max_residual!r}",
            f"threshold={r.threshold!r}",
            f"passed={'true' if r.passed else 'false'}",
            f"runtime={r.runtime:.3f}",
        ]
    failed = sum(not r.passed for r in results)
    lines += ["[summary]", f"checks={len(results)}", f"passed={len(results) - failed}", f"failed={failed}",
              f"runtime={total_runtime:.3f}"]
    return "\n".join(lines) + "\n"


def text_report(cfg, suite, results, total_runtime) -> str:
    head = " ".join(f"{k}={v}" for k, v in _run_fields(cfg, suite))
    lines = [head, ""]
    width = max((len(r.name) for r in results), default=10)
    for r in results:
        unit = " stderr" if r.kind == "mc" else ""
        lines.append(
            f"{'PASS' if r.passed else 'FAIL'}  {r.name:<{width}}  residual {r.max_residual:.3e}{unit}"
            f" <= {r.threshold:.1e}  trials {r.trials}  {r.runtime:.2f}s"
        )
        lines.append(f"      {r.anchor}")
    failed = sum(not r.passed for r in results)
    lines += ["", f"{len(results) - failed}/{len(results)} checks passed in {total_runtime:.1f}s"]
    return "\n".join(lines) + "\n"


# -- commands -------------------------------------------------------------------

def cmd_verify(args, out) -> int:
    cfg, suite = build_config(args)
    start = time.perf_counter()
    results = checks.run_suite(cfg, suite)
    total = time.perf_counter() - start
    render = structured_report if cfg.report == "structured" else text_report
    out.write(render(cfg, suite, results, total))
    return 0 if all(r.passed for r in results) else 1


def cmd_frame(args, out) -> int:
    nu = parse_complexes(args.nu, 2, "--nu")
    p = parse_reals(args.p, 4, "--p")
    if args.m > 0:
        f = massive_spin_frame(nu, p, args.m)
        out.write(f"massive spin-frame at p={tuple(p.tolist())}, m={args.m!r}\n")
        out.write(f"omega^A = {_fmt_spinor(f.omega.components)}\n")
        out.write(f"pi^A    = {_fmt_spinor(f.pi.components)}\n")
    elif args.m == 0:
        n = parse_reals(args.n, 4, "--n")
        f = massless_spin_frame(nu, p, n)
        out.write(f"massless spin-frame at p={tuple(p.tolist())}, n={tuple(n.tolist())}\n")
        out.write(f"pi^A    = {_fmt_spinor(f.pi.components)}\n")
        out.write(f"omega^A = {_fmt_spinor(f.omega.components)}\n")
    else:
        raise UsageError("--m must be nonnegative")
    out.write("residuals:\n")
    for key, value in f.residuals().items():
        out.write(f"  {key} = {value:.3e}\n")
    return 0


def _sl2c_from_args(args) -> SL2C:
    if args.S is not None:
        return SL2C(parse_complexes(args.S, 4, "--S").reshape(2, 2))
    if args.rotate_z is not None:
        return SL2C.rotation_z(args.rotate_z)
    if args.boost_z is not None:
        return SL2C.boost_z(args.boost_z)
    return SL2C.identity()


def cmd_transform(args, out) -> int:
    s = _sl2c_from_args(args)
    nu = parse_complexes(args.nu, 2, "--nu")
    p = parse_reals(args.p, 4, "--p")
    if args.m > 0:
        u = bw_transform_matrix(s, nu, p, args.m, args.sign)
        mat = u.matrix
        out.write(f"U(S, nu, p), energy sign {args.sign}\n")
        out.write(f"  [{format_complex(mat[0, 0])}, {format_complex(mat[0, 1])}]\n")
        out.write(f"  [{format_complex(mat[1, 0])}, {format_complex(mat[1, 1])}]\n")
        out.write(f"det = {format_complex(u.det())}\n")
        out.write(f"varsigma_residual = {float(u.varsigma_residual()):.3e}\n")
        out.write(f"pattern_residual = {float(u.pattern_residual()):.3e}\n")
    elif args.m == 0:
        n_vec = parse_reals(args.n, 4, "--n")
        z = complex(massless_phase_factor(s, nu, p, args.spin, args.kind, n_vec))
        out.write(f"phase (n={args.spin}, kind {args.kind}) = {format_complex(z)}\n")
        out.write(f"|phase| - 1 = {abs(z) - 1.0:.3e}\n")
    else:
        raise UsageError("--m must be nonnegative")
    return 0


def cmd_norm(args, out) -> int:
    s = _sl2c_from_args(args)
    transformed = not np.allclose(s.matrix, np.eye(2))
    if args.m > 0:
        fx = checks.MASSIVE_FIXTURE
        center = parse_reals(args.center, 4, "--center") if args.center else np.asarray(fx["center"]) * args.m
        width = fx["width"] if args.width is None else args.width
        profile = parse_complexes(args.profile, what="--profile") if args.profile else np.asarray(fx["profile"])
        n = int(round(math.log2(profile.size)))
        if 2**n != profile.size or n < 1:
            raise UsageError("--profile needs 2^n components")
        wp = Wavepacket(center, width, profile.reshape((2,) * n))
        field = make_gaussian_field(wp, args.m)
        if transformed:
            field = apply_passive(s, field)
        sampler = checks.moved_sampler(wp, args.m, s, args.seed) if transformed else wp.sampler(args.m, seed=args.seed)
        value, err = bw_norm(field, sampler, args.samples)
        is_fixture = (args.m == fx["mass"] and width == fx["width"] and np.allclose(center, fx["center"])
                      and np.array_equal(profile, np.asarray(fx["profile"], dtype=complex)))
        oracle = checks.MASSIVE_FIXTURE_NORM
    elif args.m == 0:
        fx = checks.MASSLESS_FIXTURE
        center = parse_reals(args.center, 4, "--center") if args.center else np.asarray(fx["center"])
        width = fx["width"] if args.width is None else args.width
        value0 = parse_complex(args.profile) if args.profile else complex(fx["value"])
        wp = Wavepacket(center, width, np.asarray(value0))
        field = make_massless_gaussian(wp, n=args.spin)
        if transformed:
            field = apply_passive_massless(s, field)
        sampler = checks.moved_sampler(wp, 0.0, s, args.seed) if transformed else wp.sampler(0.0, seed=args.seed)
        value, err = massless_norm(field, sampler, args.samples)
        is_fixture = width == fx["width"] and np.allclose(center, fx["center"]) and value0 == fx["value"]
        oracle = checks.MASSLESS_FIXTURE_NORM
    else:
        raise UsageError("--m must be nonnegative")
    if transformed:
        out.write(f"transformed by S with Lambda(S) p0 = {tuple(apply_lorentz(sl2c_to_lorentz(s), center).round(12).tolist())}\n")
    out.write(f"norm = {value!r}\nstderr = {err!r}\nsamples = {args.samples}\nseed = {args.seed}\n")
    out.write(f"sampler: {sampler.describe()}\n")
    if is_fixture:
        out.write(f"oracle = {oracle!r}\nz = {abs(value - oracle) / err:.3f}\n")
    return 0


# -- argument parser -------------------------------------------------------------

def _add_transform_flags(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--S", help="SL(2,C) matrix, four complex entries row-major")
    g.add_argument("--rotate-z", type=float, metavar="THETA", help="S = diag(e^{-i theta/2}, e^{i theta/2})")
    g.add_argument("--boost-z", type=float, metavar="CHI", help="S = diag(e^{chi/2}, e^{-chi/2})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bwspinor", description="Spin-frame and Bargmann-Wigner transformation toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the identity suites")
    v.add_argument("--suite", choices=checks.SUITES + ("all",))
    v.add_argument("--seed", type=int)
    v.add_argument("--trials", type=int, help="instances per algebraic check (default 100000)")
    v.add_argument("--mc-samples", type=int, help="samples per Monte Carlo integral (default 1000000)")
    v.add_argument("--tol", type=float, help="override every algebraic threshold")
    v.add_argument("--mass", help="comma-separated masses (default 1)")
    v.add_argument("--spin", help="comma-separated spin counts n (default 1,2,3)")
    v.add_argument("--rapidity-max", type=float, help="rapidity bound for random momenta (default 5)")
    v.add_argument("--report", choices=("text", "structured"))
    v.add_argument("--config", metavar="PATH", help="key=value file; flags take precedence")

    f = sub.add_parser("frame", help="build a spin-frame")
    f.add_argument("--nu", required=True, help="reference spinor nu^A")
    f.add_argument("--p", required=True, help="momentum t,x,y,z")
    f.add_argument("--m", required=True, type=float, help="mass; 0 selects the massless frame")
    f.add_argument("--n", default="1,0,0,0", help="auxiliary timelike vector (massless only)")

    t = sub.add_parser("transform", help="BW transformation matrix or massless phase")
    t.add_argument("--nu", required=True)
    t.add_argument("--p", required=True)
    t.add_argument("--m", required=True, type=float)
    t.add_argument("--sign", default="+", choices=("+", "-"))
    t.add_argument("--spin", type=int, default=1, help="index count n (massless)")
    t.add_argument("--kind", default="0", choices=("0", "1"), help="unprimed (0) or primed (1) massless field")
    t.add_argument("--n", default="1,0,0,0", help="auxiliary timelike vector (massless)")
    _add_transform_flags(t)

    n = sub.add_parser("norm", help="Monte Carlo norm of a Gaussian wavepacket")
    n.add_argument("--m", required=True, type=float)
    n.add_argument("--center", help="on-shell centre momentum (default: the documented fixture)")
    n.add_argument("--width", type=float)
    n.add_argument("--profile", help="massive: 2^n complex BW components; massless: one complex value")
    n.add_argument("--spin", type=int, default=1, help="index count n (massless)")
    n.add_argument("--samples", type=int, default=10**6)
    n.add_argument("--seed", type=int, default=0)
    _add_transform_flags(n)
    return parser


COMMANDS = {"verify": cmd_verify, "frame": cmd_frame, "transform": cmd_transform, "norm": cmd_norm}


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"bwspinor: error: {exc}", file=sys.stderr)
        return 2
    except SpinorError as exc:
        print(f"bwspinor: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
