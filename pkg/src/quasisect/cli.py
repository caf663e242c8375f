"""Command-line front end.

Usage::

    quasisect gen --dim 20 --alpha pi/6 --seed 7 --out run/
    quasisect numrange --matrix run/matrix.txt --out run/
    quasisect check-dalpha --matrix run/matrix.txt --alpha pi/6 --apply semigroup --t 1 --out run/
    quasisect geometry --alpha pi/4 --out run/
    quasisect euler --matrix run/matrix.txt --t 1 --n-min 8 --n-max 1024 --out run/
    quasisect chernoff --dim 20 --alpha pi/6 --t 0.3 --out run/
    quasisect family --dim 20 --alpha pi/4 --out run/
    quasisect verify --seed 7 --out run/verify/

Exit codes: 0 success, 1 claim failure, 2 usage or configuration error.
Worker threads for ``verify`` are capped by ``QUASISECT_WORKERS``
(default: number of logical cores).
"""

from __future__ import annotations

import json
import math
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click
import numpy as np

from . import claims as claims_mod
from . import dalpha
from .errors import NotSectorial
from .generators import MatrixGenSpec, euler_resolvent, gen_msectorial, semigroup_value
from .harness import (
    chernoff_error_curve,
    chernoff_family_check,
    euler_error_curve,
    power_of_two_grid,
)
from .matcore import atomic_write_text, read_matrix, write_matrix
from .numrange import measured_semiangle, nr_boundary

__all__ = ["main", "parse_angle", "WORKERS_ENV"]

WORKERS_ENV = "QUASISECT_WORKERS"

_PI_RE = re.compile(r"^\s*([+-]?(?:\d+(?:\.\d*)?|\.\d+)?)\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$")


def parse_angle(text: str) -> float:
    """Parse a radian angle: a decimal number or ``[c*]pi[/d]`` (e.g. ``pi/6``, ``3pi/8``)."""
    m = _PI_RE.match(text)
    if m:
        coef = m.group(1)
        num = float(coef) if coef not in ("", "+", "-", None) else (-1.0 if coef == "-" else 1.0)
        den = float(m.group(2)) if m.group(2) else 1.0
        if den == 0.0:
            raise ValueError("zero denominator")
        return num * math.pi / den
    return float(text)


class AngleType(click.ParamType):
    name = "angle"

    def convert(self, value, param, ctx):
        if isinstance(value, float):
            return value
        try:
            out = parse_angle(str(value))
        except ValueError:
            self.fail(f"{value!r} is not an angle in radians (use e.g. 0.5 or pi/6)", param, ctx)
        if not math.isfinite(out):
            self.fail(f"{value!r} is not finite", param, ctx)
        return out


ANGLE = AngleType()


def _fmt(x: float) -> str:
    return f"{x:.16e}"


def _write_json(path: Path, obj) -> None:
    atomic_write_text(path, json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n")


def _write_csv(path: Path, header: str, rows) -> None:
    lines = [header] + [",".join(r) for r in rows]
    atomic_write_text(path, "\n".join(lines) + "\n")


def _wants(fmt: str | None, kind: str) -> bool:
    return fmt is None or fmt == kind


def _check_alpha(alpha: float, exploratory: bool = False) -> None:
    if not 0.0 <= alpha < math.pi / 2:
        raise click.BadParameter(f"alpha must lie in [0, pi/2), got {alpha}", param_hint="--alpha")
    if alpha > math.pi / 4 and not exploratory:
        click.echo(f"note: alpha = {alpha:.6f} > pi/4 lies outside the guaranteed range", err=True)


def _load_or_generate(matrix, dim, alpha, seed, scale):
    """Return ``(A, meta)`` where meta records provenance for the JSON reports."""
    if matrix is not None:
        try:
            A = read_matrix(matrix)
        except (OSError, ValueError) as exc:
            raise click.BadParameter(str(exc), param_hint="--matrix") from exc
        return A, {"dim": int(A.shape[0]), "alpha": None, "seed": None, "matrix": os.path.basename(matrix)}
    spec = MatrixGenSpec(dim, alpha, seed, scale)
    return gen_msectorial(spec), {"dim": dim, "alpha": alpha, "seed": seed, "matrix": None}


def _n_grid(n_min: int, n_max: int) -> list[int]:
    if n_min > n_max:
        raise click.UsageError(f"--n-min ({n_min}) exceeds --n-max ({n_max})")
    ns = power_of_two_grid(n_min, n_max)
    if len(ns) < 4:
        raise click.UsageError("the n range must contain at least 4 powers of two for a rate fit")
    return ns


# -- shared options ------------------------------------------------------------------

def _opt_matrix(f):
    return click.option("--matrix", type=click.Path(dir_okay=False, exists=True), default=None,
                        help="Matrix file; when omitted a matrix is generated from --dim/--alpha/--seed.")(f)


def _opt_gen(f):
    f = click.option("--scale", type=click.FloatRange(min=0.0, min_open=True), default=1.0, show_default=True,
                     help="Spectral scale of the Hermitian part.")(f)
    f = click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=claims_mod.DEFAULT_SEED, show_default=True)(f)
    f = click.option("--alpha", type=ANGLE, default="pi/4", show_default=True, help="Semi-angle in radians (pi/6 syntax allowed).")(f)
    f = click.option("--dim", type=click.IntRange(min=1), default=20, show_default=True)(f)
    return f


def _opt_out(f):
    f = click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default=None,
                     help="Emit only this artifact type (default: both).")(f)
    f = click.option("--out", "out_dir", type=click.Path(file_okay=False), default=".", show_default=True)(f)
    return f


def _opt_n(f):
    f = click.option("--n-max", type=click.IntRange(min=1), default=1024, show_default=True)(f)
    f = click.option("--n-min", type=click.IntRange(min=1), default=8, show_default=True)(f)
    return f


def _outdir(out_dir) -> Path:
    p = Path(out_dir)
    p.mkdir(parents=True, exist_ok=True)
    return p


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def main():
    """Numerical checks for quasi-sectorial contractions and their semigroup approximations."""


@main.command("gen")
@_opt_gen
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=".", show_default=True)
@click.option("--kind", type=click.Choice(["random", "laplacian"]), default="random", show_default=True)
@click.option("--pin-vertex", is_flag=True, help="Shift the Hermitian part so its smallest eigenvalue is 0.")
def cmd_gen(dim, alpha, seed, scale, out_dir, kind, pin_vertex):
    """Generate an m-sectorial matrix and write matrix.txt plus spec.json."""
    _check_alpha(alpha, exploratory=True)
    spec = MatrixGenSpec(dim, alpha, seed, scale, kind=kind, pin_vertex=pin_vertex)
    out = _outdir(out_dir)
    write_matrix(out / "matrix.txt", gen_msectorial(spec))
    atomic_write_text(out / "spec.json", spec.to_json() + "\n")


@main.command("numrange")
@_opt_matrix
@_opt_gen
@click.option("--m", type=click.IntRange(min=8), default=512, show_default=True, help="Number of boundary directions.")
@_opt_out
def cmd_numrange(matrix, dim, alpha, seed, scale, m, out_dir, fmt):
    """Trace the numerical-range boundary (numrange.csv / numrange.json)."""
    A, meta = _load_or_generate(matrix, dim, alpha, seed, scale)
    B = nr_boundary(A, m)
    out = _outdir(out_dir)
    if _wants(fmt, "csv"):
        _write_csv(out / "numrange.csv", "theta,re,im",
                   ((_fmt(th), _fmt(z.real), _fmt(z.imag)) for th, z in zip(B.angles, B.points)))
    if _wants(fmt, "json"):
        try:
            semi = measured_semiangle(B)
        except NotSectorial:
            semi = None
        _write_json(out / "numrange.json", {
            **meta, "m": m, "measured_semiangle": semi, "scale": B.scale,
            "hull_vertices": int(len(B.hull())), "hull_area": B.area(),
        })


@main.command("check-dalpha")
@_opt_matrix
@_opt_gen
@click.option("--apply", "apply_", type=click.Choice(["none", "resolvent", "semigroup"]), default="semigroup",
              show_default=True, help="Check the matrix itself, (I + tA)^-1, or exp(-tA).")
@click.option("--t", "t", type=click.FloatRange(min=0.0), default=1.0, show_default=True)
@click.option("--m", type=click.IntRange(min=8), default=512, show_default=True)
@click.option("--tol", type=click.FloatRange(min=0.0), default=1e-8, show_default=True)
@_opt_out
def cmd_check_dalpha(matrix, dim, alpha, seed, scale, apply_, t, m, tol, out_dir, fmt):
    """Check that the numerical range of a contraction lies in D_alpha."""
    _check_alpha(alpha, exploratory=True)
    A, meta = _load_or_generate(matrix, dim, alpha, seed, scale)
    C = {"none": lambda: A, "resolvent": lambda: euler_resolvent(A, t), "semigroup": lambda: semigroup_value(A, t)}[apply_]()
    B = nr_boundary(C, m)
    dist = dalpha.dalpha_distance(alpha, B.points)
    worst = float(np.max(dist))
    ok = worst <= tol
    out = _outdir(out_dir)
    if _wants(fmt, "csv"):
        _write_csv(out / "check-dalpha.csv", "theta,re,im,distance",
                   ((_fmt(th), _fmt(z.real), _fmt(z.imag), _fmt(d)) for th, z, d in zip(B.angles, B.points, dist)))
    if _wants(fmt, "json"):
        _write_json(out / "check-dalpha.json", {
            **meta, "alpha": alpha, "apply": apply_, "t": t, "m": m, "tol": tol,
            "worst_distance": worst, "ok": ok,
        })
    sys.exit(0 if ok else 1)


@main.command("geometry")
@click.option("--alpha", type=ANGLE, default=None, help="Semi-angle; default is the grid pi/12, pi/6, pi/5, pi/4.")
@click.option("--n-min", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--n-max", type=click.IntRange(min=1), default=64, show_default=True)
@click.option("--points", type=click.IntRange(min=2), default=101, show_default=True, help="Samples per tangent segment.")
@click.option("--exploratory", is_flag=True, help="Allow alpha > pi/4 for the containment sweep.")
@_opt_out
def cmd_geometry(alpha, n_min, n_max, points, exploratory, out_dir, fmt):
    """Tangent-segment power images (geometry.csv) and closed-form tables (geometry.json)."""
    if n_min > n_max:
        raise click.UsageError(f"--n-min ({n_min}) exceeds --n-max ({n_max})")
    if alpha is not None:
        _check_alpha(alpha, exploratory)
        if alpha == 0.0:
            raise click.BadParameter("the closed forms need alpha > 0", param_hint="--alpha")
        if alpha > math.pi / 4 and not exploratory:
            raise click.UsageError("alpha > pi/4 requires --exploratory")
    alphas = [alpha] if alpha is not None else list(claims_mod.ALPHA_GRID)
    ns = power_of_two_grid(n_min, n_max)
    out = _outdir(out_dir)
    if _wants(fmt, "csv"):
        rows = []
        for a in alphas:
            t = np.linspace(0.0, math.cos(a), points)
            z = dalpha.zeta(t, "+", a)
            for n in ns:
                w = z**n
                rows.extend((str(n), _fmt(ti), _fmt(wi.real), _fmt(wi.imag)) for ti, wi in zip(t, w))
        _write_csv(out / "geometry.csv", "n,t,re,im", rows)
    if _wants(fmt, "json"):
        table = {}
        for a in alphas:
            sup = dalpha.sup_im_f2(a)
            lim = dalpha.asymptotic_limits(a)
            exact = dalpha.scaled_limit_extrema(a)
            cont = dalpha.verify_power_containment(a, n_max, 2000)
            table[_fmt(a)] = {
                "alpha": a,
                "sup_im_f2": sup.value,
                "t_star": sup.t_star,
                "sin_cos": math.sin(a) * math.cos(a),
                "im_limit": lim.im_limit,
                "re_limit": lim.re_limit,
                "exact_sup_im_limit": exact.sup_im,
                "exact_min_re_limit": exact.min_re,
                "im_bound": {str(n): dalpha.im_sup_bound_fn(a, n) for n in ns},
                "grid_sup_im": {str(n): dalpha.segment_power_extrema(a, n, 10_001).sup_im for n in ns},
                "containment_ok": cont.ok,
                "containment_worst_violation": cont.worst_violation,
                "exploratory": a > math.pi / 4,
            }
        _write_json(out / "geometry.json", table)


def _emit_curve(out: Path, stem: str, fmt, report, meta: dict):
    if _wants(fmt, "csv"):
        _write_csv(out / f"{stem}.csv", "n,error", ((str(n), _fmt(e)) for n, e in zip(report.n_values, report.errors)))
    if _wants(fmt, "json"):
        _write_json(out / f"{stem}.json", {**meta, **report.as_dict()})


@main.command("euler")
@_opt_matrix
@_opt_gen
@click.option("--t", "t", type=click.FloatRange(min=0.0, min_open=True), default=1.0, show_default=True)
@_opt_n
@_opt_out
def cmd_euler(matrix, dim, alpha, seed, scale, t, n_min, n_max, out_dir, fmt):
    """Euler-formula error curve ||(I + tA/n)^-n - exp(-tA)|| (euler.csv / euler.json)."""
    ns = _n_grid(n_min, n_max)
    A, meta = _load_or_generate(matrix, dim, alpha, seed, scale)
    _emit_curve(_outdir(out_dir), "euler", fmt, euler_error_curve(A, t, ns), meta)


@main.command("chernoff")
@_opt_matrix
@_opt_gen
@click.option("--t", "t", type=click.FloatRange(min=0.0, min_open=True), default=0.3, show_default=True,
              help="The contraction is C = (I + tA)^-1.")
@_opt_n
@_opt_out
def cmd_chernoff(matrix, dim, alpha, seed, scale, t, n_min, n_max, out_dir, fmt):
    """Chernoff error curve ||C^n - exp(n(C - I))|| with C = (I + tA)^-1."""
    ns = _n_grid(n_min, n_max)
    A, meta = _load_or_generate(matrix, dim, alpha, seed, scale)
    report = chernoff_error_curve(lambda s: euler_resolvent(A, s), t, ns, strict=False)
    _emit_curve(_outdir(out_dir), "chernoff", fmt, report, meta)


@main.command("family")
@_opt_matrix
@_opt_gen
@click.option("--t", "t", type=click.FloatRange(min=0.0, min_open=True), default=1.0, show_default=True)
@_opt_n
@_opt_out
def cmd_family(matrix, dim, alpha, seed, scale, t, n_min, n_max, out_dir, fmt):
    """Product approximations Phi(t/n)^n for the three preset contraction families."""
    ns = _n_grid(n_min, n_max)
    A, meta = _load_or_generate(matrix, dim, alpha, seed, scale)
    families = {
        "resolvent": lambda s: euler_resolvent(A, s),
        "semigroup": lambda s: semigroup_value(A, s),
        "half_step_squared": lambda s: euler_resolvent(A, s / 2) @ euler_resolvent(A, s / 2),
    }
    out = _outdir(out_dir)
    for name, phi in families.items():
        report = chernoff_family_check(phi, A, t, ns, strict=False)
        _emit_curve(out, f"family-{name}", fmt, report, {**meta, "family": name, "converged": report.converged})


def _workers() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw is None:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise click.UsageError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}")
    if n < 1:
        raise click.UsageError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}")
    return n


@main.command("verify")
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=claims_mod.DEFAULT_SEED, show_default=True)
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default="verify-out", show_default=True)
@click.option("--only", multiple=True, type=click.Choice(list(claims_mod.CLAIMS)), help="Run only these claims.")
@click.option("--alpha", type=ANGLE, default=None, help="Semi-angle for the exploratory containment sweep.")
@click.option("--exploratory", is_flag=True, help="Also run the containment sweep at --alpha (no acceptance weight).")
def cmd_verify(seed, out_dir, only, alpha, exploratory):
    """Run the verification claims; one JSON per claim plus summary.json."""
    if alpha is not None and not exploratory:
        raise click.UsageError("--alpha is only used together with --exploratory")
    if exploratory:
        if alpha is None:
            raise click.UsageError("--exploratory needs --alpha")
        if not 0.0 <= alpha < math.pi / 2:
            raise click.BadParameter(f"alpha must lie in [0, pi/2), got {alpha}", param_hint="--alpha")
    workers = _workers()
    names = [n for n in claims_mod.CLAIMS if not only or n in only]
    out = _outdir(out_dir)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(claims_mod.run_claim, name, seed) for name in names]
        results = [f.result() for f in futures]

    for res in results:
        _write_json(out / f"{res.claim}.json", res.as_dict())
        click.echo(f"{'PASS' if res.passed else 'FAIL'}  {res.claim:<28s} {res.runtime:7.2f}s")

    summary = {
        "seed": seed,
        "passed": all(r.passed for r in results),
        "claims": [{"claim": r.claim, "passed": r.passed} for r in results],
    }
    if exploratory:
        summary["exploratory"] = claims_mod.exploratory_containment(alpha)
        _write_json(out / "exploratory-containment.json", summary["exploratory"])
    _write_json(out / "summary.json", summary)

    failed = [r.claim for r in results if not r.passed]
    if failed:
        click.echo("failing claims: " + " ".join(failed), err=True)
        sys.exit(1)


if __name__ == "__main__":
    main()
