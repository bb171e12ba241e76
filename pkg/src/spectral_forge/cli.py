# spectral_forge/cli.py
"""
Command line driver.

Subcommands: cover, fm, roundtrip, classify, modify, props, sample.
Every JSON report embeds the scenario hash and the tolerance used, and is
serialized canonically (sorted keys, tight separators) so repeated runs
give byte-identical output.

Exit codes: 0 success, 1 verification failure, 2 schema or input error,
64 unsupported construction (including map punctures at sample points).

SPECTRAL_FORGE_THREADS caps sample-level parallelism; report assembly is
single-threaded and sample ordering is by index regardless of thread count.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Sequence

from .covers import HyperCover
from .errors import (SchemaError, SpectralForgeError, UnsupportedError,
                     VerificationError)
from .families import (FamilySpec, PushforwardData, cover_from_family,
                       default_sample_points, jump_report)
from .fiber import spectral_points
from .fourier import (descent_divisor, fm_transform, roundtrip_check,
                      z_action_residual)
from .scenario import (Scenario, canonical_json, encode_base_point,
                       encode_complex, load_scenario)
from .spectral import (PellMap, SpectralCover, TwoSections,
                       invariance_residual, sample_circle)
from .surface import GroupPresentation, fibre_component_groups, pic_relative

__all__ = ["main", "run_command"]


# ============================================================
# Sample-level parallelism
# ============================================================

def _thread_count() -> int:
    raw = os.environ.get("SPECTRAL_FORGE_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _pmap(fn: Callable, items: Sequence) -> list:
    """Order-preserving map, threaded when SPECTRAL_FORGE_THREADS > 1."""
    n = _thread_count()
    if n <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(n, len(items))) as pool:
        return list(pool.map(fn, items))


# ============================================================
# Shared helpers
# ============================================================

def _effective(scn: Scenario, args: argparse.Namespace) -> tuple[int, float, int]:
    samples = args.samples if args.samples is not None else scn.samples
    tol = args.tol if args.tol is not None else scn.tol
    seed = args.seed if args.seed is not None else scn.seed
    return samples, tol, seed


def _require_family(scn: Scenario) -> FamilySpec:
    if scn.family is None:
        raise SchemaError("this command needs a family section")
    if scn.determinant is not None:
        if not scn.family.determinant.isomorphic(scn.determinant):
            raise VerificationError(
                "declared determinant disagrees with the family presentation")
    return scn.family


def _family_points(scn: Scenario, samples: int, seed: int) -> list[complex]:
    if scn.points is not None:
        return list(scn.points)
    fam = _require_family(scn)
    return default_sample_points(fam, samples, phase=0.05 * seed)


def _cover_points(scn: Scenario, cover: SpectralCover, samples: int,
                  seed: int) -> list[complex]:
    """Deterministic circle avoiding punctures; explicit points bypass the
    avoidance so poles at declared samples surface as puncture errors."""
    if scn.points is not None:
        return list(scn.points)
    if scn.family is not None:
        return _family_points(scn, samples, seed)
    base_r = abs(cover.curve.tau)
    bis = cover.bisection
    for attempt in range(8):
        pts = sample_circle(samples, base_r * (1.0 + 0.13 * attempt), 0j,
                            phase=0.05 * seed + 0.05 * attempt)
        if isinstance(bis, PellMap) and any(bis.punctures_near(b) for b in pts):
            continue
        return pts
    raise UnsupportedError("no puncture-free sample circle found")


def _resolve_cover(scn: Scenario, pts: list[complex]) -> SpectralCover:
    if scn.cover is not None:
        return scn.cover
    fam = _require_family(scn)
    return cover_from_family(fam, pts)


def _invariance_delta(scn: Scenario):
    """Bundle whose fibre factor the sheet product must hit; the inverse
    determinant for a family, the declared one otherwise."""
    if scn.family is not None:
        return scn.family.involution_bundle()
    if scn.determinant is not None:
        return scn.determinant.dual()
    return None


def _hyper_cover(scn: Scenario) -> HyperCover:
    if scn.family is not None and isinstance(scn.family.data, PushforwardData):
        return scn.family.data.cover
    if scn.cover is not None and isinstance(scn.cover.bisection, PellMap):
        return scn.cover.bisection.cover
    raise UnsupportedError(
        "classification needs a double cover (pushforward family or "
        "pell bisection)")


def _encode_bisection(bis: Any) -> dict:
    if isinstance(bis, TwoSections):
        return {"type": "two_sections",
                "a1": encode_complex(bis.a1), "a2": encode_complex(bis.a2)}
    if isinstance(bis, PellMap):
        return {"type": "pell",
                "genus": bis.cover.genus,
                "degrees": {"u": bis.u_part.degree, "v": bis.v_part.degree,
                            "r": bis.r_part.degree},
                "norm_constant": encode_complex(bis.norm_value())}
    return {"type": type(bis).__name__.lower()}


def _encode_cover(cover: SpectralCover) -> dict:
    return {
        "verticals": [{"at": encode_base_point(at), "multiplicity": m}
                      for at, m in cover.verticals],
        "bisection": _encode_bisection(cover.bisection),
        "vertical_total": cover.vertical_total(),
        "torus_degree": cover.torus_degree(),
        "n_total": cover.n_total(),
    }


def _encode_group(g: GroupPresentation) -> dict:
    return {"free_rank": g.free_rank, "torsion": list(g.torsion),
            "divisible": list(g.divisible), "generators": list(g.generators)}


def _envelope(command: str, scn: Scenario, samples: int, tol: float,
              seed: int) -> dict:
    return {"command": command, "scenario_hash": scn.hash(),
            "tolerance": tol, "samples": samples, "seed": seed}


# ============================================================
# Subcommand handlers (report dict, exit code)
# ============================================================

def _cmd_cover(scn: Scenario, args: argparse.Namespace) -> tuple[dict, int]:
    samples, tol, seed = _effective(scn, args)
    code = 0
    if scn.cover is not None:
        cover = scn.cover
        pts = _cover_points(scn, cover, samples, seed)
        # force evaluation so declared sample points hit punctures loudly
        _pmap(cover.values_at, pts)
    else:
        fam = _require_family(scn)
        pts = _family_points(scn, samples, seed)
        cover = cover_from_family(fam, pts)
    report = _envelope("cover", scn, samples, tol, seed)
    report["cover"] = _encode_cover(cover)
    delta = _invariance_delta(scn)
    if delta is not None:
        residual = invariance_residual(cover, delta, pts)
        passed = residual <= tol
        report["invariance"] = {"checked": True, "max_residual": residual,
                                "passed": passed}
        if not passed:
            code = 1
    else:
        report["invariance"] = {"checked": False}
    return report, code


def _cmd_fm(scn: Scenario, args: argparse.Namespace) -> tuple[dict, int]:
    samples, tol, seed = _effective(scn, args)
    fam = _require_family(scn)
    pts = _family_points(scn, samples, seed)
    sheaf = fm_transform(fam, pts)
    residual = invariance_residual(sheaf.support, fam.involution_bundle(), pts)
    rt = roundtrip_check(fam, pts, tol)
    report = _envelope("fm", scn, samples, tol, seed)
    report["phi0_vanishes"] = sheaf.phi0_vanishes
    report["support"] = _encode_cover(sheaf.support)
    report["residual"] = residual
    report["roundtrip_status"] = rt.status
    report["rank_profile"] = sheaf.rank_profile
    report["chern"] = {"c1_fibre_multiple": sheaf.chern.c1_fibre_multiple,
                       "c2": sheaf.chern.c2}
    return report, 0 if rt.status != "fail" else 1


def _cmd_roundtrip(scn: Scenario, args: argparse.Namespace) -> tuple[dict, int]:
    samples, tol, seed = _effective(scn, args)
    fam = _require_family(scn)
    pts = _family_points(scn, samples, seed)
    rt = roundtrip_check(fam, pts, tol)
    report = _envelope("roundtrip", scn, samples, tol, seed)
    report["status"] = rt.status
    report["phi0_vanishes"] = rt.phi0_vanishes
    report["checks"] = [{"name": n, "passed": ok, "detail": d}
                        for n, ok, d in rt.checks]
    return report, 0 if rt.passed() else 1


def _cmd_classify(scn: Scenario, args: argparse.Namespace) -> tuple[dict, int]:
    samples, tol, seed = _effective(scn, args)
    cover = _hyper_cover(scn)
    groups = fibre_component_groups(scn.surface, cover)
    pic = pic_relative(scn.surface)
    report = _envelope("classify", scn, samples, tol, seed)
    report["prym_rank"] = groups.prym_genus
    report["jacobian_copies"] = groups.jacobian_copies
    report["kernel_components"] = groups.kernel_components
    report["component_count"] = groups.components
    report["collapsed_multiplicities"] = list(groups.collapsed_multiplicities)
    report["ambient"] = _encode_group(groups.ambient)
    report["identity_quotient"] = _encode_group(groups.identity_quotient)
    report["twist_group"] = _encode_group(groups.twist_group)
    report["relative_picard"] = _encode_group(pic)
    report["invariant_factors"] = list(groups.twist_group.invariant_factors())
    return report, 0


def _cmd_modify(scn: Scenario, args: argparse.Namespace) -> tuple[dict, int]:
    samples, tol, seed = _effective(scn, args)
    fam = _require_family(scn)
    report = _envelope("modify", scn, samples, tol, seed)
    report["jumps"] = [
        {"at": encode_base_point(rec.at), "h": rec.height,
         "mu": rec.multiplicity, "l": rec.length,
         "sequence": list(rec.sequence)}
        for rec in jump_report(fam)
    ]
    det = fam.determinant
    report["determinant"] = {
        "base_class": det.base_class,
        "factor": encode_complex(det.constant_factor),
        "fibre_parts": list(det.fibre_parts),
    }
    report["chern"] = {"c1_fibre_multiple": fam.chern.c1_fibre_multiple,
                       "c2": fam.chern.c2}
    report["steps"] = len(fam.steps)
    return report, 0


def _cmd_props(scn: Scenario, args: argparse.Namespace) -> tuple[dict, int]:
    samples, tol, seed = _effective(scn, args)
    fam = _require_family(scn)
    pts = _family_points(scn, samples, seed)
    checks: list[dict] = []

    def add(name: str, passed: bool, detail: str = "") -> None:
        checks.append({"name": name, "passed": bool(passed), "detail": detail})

    try:
        cover = cover_from_family(fam, pts)
        add("cover_consistency", True)
    except VerificationError as exc:
        cover = None
        add("cover_consistency", False, str(exc))

    if cover is not None:
        residual = invariance_residual(cover, fam.involution_bundle(), pts)
        add("cover_invariance", residual <= tol, f"max residual {residual:.3e}")

    for rec in jump_report(fam):
        ok = (rec.height == rec.sequence[0]
              and rec.multiplicity == sum(rec.sequence)
              and rec.length == len(rec.sequence))
        add("jump_shape", ok, f"at {encode_base_point(rec.at)}")

    stacked = sum(s.degree for p in fam.jump_points()
                  for s in fam.jump_stack(p))
    add("chern_stack", fam.chern.c2 == fam.base_c2 + stacked,
        f"c2 {fam.chern.c2} vs base {fam.base_c2} + stacked {stacked}")

    def product_defect(b: complex) -> float:
        fc = fam.fiber_class_at(b)
        spts = spectral_points(fc)
        if spts is None:
            return 0.0
        curve = fam.curve
        product = spts[0].value * spts[1].value
        target = fam.involution_bundle().restrict_to_fiber(b).factor
        ratio = product / target
        k = curve.lattice_log(ratio)
        if k is None:
            return abs(ratio)
        return abs(ratio / curve.tau ** k - 1.0)

    defects = _pmap(product_defect, pts)
    worst = max(defects) if defects else 0.0
    add("fibre_product_involution", worst <= tol, f"max defect {worst:.3e}")

    if scn.descent_point is not None:
        twist = descent_divisor(fam, scn.descent_point)
        # the residual samples its own circle around b0 so the disabled
        # check never degenerates near |x - b0| = 1
        r_on = z_action_residual(fam, twist, samples)
        r_off = z_action_residual(fam, twist.disabled(), samples)
        add("descent_twist_enabled", r_on <= tol, f"residual {r_on:.3e}")
        add("descent_twist_disabled_detects", r_off >= 0.1,
            f"residual {r_off:.3e}")

    report = _envelope("props", scn, samples, tol, seed)
    report["checks"] = checks
    ok = all(c["passed"] for c in checks)
    report["status"] = "pass" if ok else "fail"
    return report, 0 if ok else 1


def _cmd_sample(scn: Scenario, args: argparse.Namespace) -> tuple[dict, int]:
    samples, tol, seed = _effective(scn, args)
    if scn.cover is not None:
        cover = scn.cover
        pts = _cover_points(scn, cover, samples, seed)
    else:
        fam = _require_family(scn)
        pts = _family_points(scn, samples, seed)
        cover = cover_from_family(fam, pts)
    curve = cover.curve

    def rows_at(b: complex) -> list[tuple[float, float, int, float, float]]:
        v0, v1 = cover.values_at(b)
        out = []
        for sheet, v in ((0, v0), (1, v1)):
            alpha = curve.canonical_rep(v).value
            out.append((b.real, b.imag, sheet, alpha.real, alpha.imag))
        return out

    table = _pmap(rows_at, pts)
    lines = ["b_re,b_im,sheet,alpha_re,alpha_im"]
    for group in table:
        for b_re, b_im, sheet, a_re, a_im in group:
            lines.append(f"{b_re!r},{b_im!r},{sheet},{a_re!r},{a_im!r}")
    csv_text = "\n".join(lines) + "\n"
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(csv_text)
    else:
        sys.stdout.write(csv_text)
    report = _envelope("sample", scn, samples, tol, seed)
    report["rows"] = 2 * len(pts)
    report["csv"] = args.csv or "-"
    return report, 0


_HANDLERS: dict[str, Callable] = {
    "cover": _cmd_cover,
    "fm": _cmd_fm,
    "roundtrip": _cmd_roundtrip,
    "classify": _cmd_classify,
    "modify": _cmd_modify,
    "props": _cmd_props,
    "sample": _cmd_sample,
}


# ============================================================
# Entry point
# ============================================================

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectral-forge",
        description="Rank-2 bundles on elliptic surfaces over a Tate curve: "
                    "spectral covers, transforms, modifications.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("cover", "compute and verify the spectral cover"),
        ("fm", "forward transform report"),
        ("roundtrip", "transform-then-invert comparison"),
        ("classify", "component groups for fixed determinant and cover"),
        ("modify", "jump report after journal modifications"),
        ("props", "full invariant suite"),
        ("sample", "dump sampled cover points as CSV"),
    ):
        p = sub.add_parser(name, help=text)
        p.add_argument("--scenario", required=True, help="scenario JSON path")
        p.add_argument("--samples", type=int, default=None,
                       help="sample count (default 32 or scenario value)")
        p.add_argument("--tol", type=float, default=None,
                       help="tolerance (default 1e-9 or scenario value)")
        p.add_argument("--seed", type=int, default=None,
                       help="sampling seed (default 0 or scenario value)")
        p.add_argument("--csv", default=None, help="CSV output path")
        p.add_argument("--json", default=None, help="JSON report path")
    return parser


def run_command(argv: "Sequence[str] | None" = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        scn = load_scenario(args.scenario)
        report, code = _HANDLERS[args.command](scn, args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except UnsupportedError as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return 64
    except SpectralForgeError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 1
    text = canonical_json(report) + "\n"
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(text)
    elif args.command != "sample":
        sys.stdout.write(text)
    return code


def main(argv: "Sequence[str] | None" = None) -> int:
    return run_command(argv)


if __name__ == "__main__":
    sys.exit(main())
