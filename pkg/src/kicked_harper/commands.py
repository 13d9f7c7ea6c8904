"""
One runner per command. A runner takes its validated input model and returns
the result payload, the output files as bytes, and an exit code. run_command
wraps that into a RunReport; the CLI writes the files, the MCP tools do not.
"""

import asyncio
import csv
import hashlib
import io
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Type

from pydantic import BaseModel

from kicked_harper.certify import (
    certificate_to_json,
    drift_check,
    half_plane_confinement,
    modelock_verify,
    replay_certificate,
)
from kicked_harper.config import (
    BetaPlusInput,
    CertifyInput,
    ClassifyPixelInput,
    EulerInput,
    ExperimentInput,
    FixedPointsInput,
    NontwistInput,
    RotsetInput,
    ScanInput,
)
from kicked_harper.constants import BETA_PLUS_CONSTANT, EXIT_OK, EXIT_NOT_CERTIFIED
from kicked_harper.core import fixed_points, origin_eigenvalues
from kicked_harper.diffusion import classify_pixel, estimate_beta_minus_upper, render, scan, to_csv, to_pgm, to_ppm
from kicked_harper.errors import HarperError, NotCertified, UpperEndpointNotDiffusive
from kicked_harper.flows import cusp_experiment, euler_convergence
from kicked_harper.models import Budget, Params, ResponseFormat, RunReport
from kicked_harper.nontwist import conjecture_rescaled_set, rescaling_convergence
from kicked_harper.orbits import exact_rotations, mean_rotation_vector
from kicked_harper.reports import build_report, canonical_json, jsonable
from kicked_harper.rotset import (
    approx_rotation_set,
    box,
    continuity_distance,
    hausdorff,
    monotonicity_report,
    shape_classify,
)

logger = logging.getLogger(__name__)


@dataclass
class Outcome:
    result: dict
    blobs: dict = field(default_factory=dict)  # file suffix -> bytes
    exit_code: int = EXIT_OK


def _csv_bytes(header, rows) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue().encode("utf-8")


def _g(x) -> str:
    return "" if x is None else f"{x:.17g}"


def run_scan(cfg: ScanInput) -> Outcome:
    grid = scan(cfg.alpha, cfg.beta, cfg.res, Budget(cfg.seeds, cfg.iters), cfg.seed, cfg.threads)
    img = render(grid)
    return Outcome(
        result={
            "alpha_range": list(grid.alpha_range),
            "beta_range": list(grid.beta_range),
            "resolution": list(grid.resolution),
            "counts": grid.counts(),
        },
        blobs={".csv": to_csv(grid).encode("utf-8"), ".ppm": to_ppm(img), ".pgm": to_pgm(img)},
    )


def run_pixel(cfg: ClassifyPixelInput) -> Outcome:
    v = classify_pixel(Params(cfg.alpha, cfg.beta), cfg.seeds, cfg.iters, cfg.seed)
    return Outcome(result=jsonable(v))


def run_rotset(cfg: RotsetInput) -> Outcome:
    p = Params(cfg.alpha, cfg.beta)
    poly = approx_rotation_set(p, cfg.orbits, cfg.iters, cfg.seed, cfg.threads)
    exact = [
        {"vector": jsonable(r.vector), "period": r.period, "witness": [r.witness.x, r.witness.y]}
        for r in exact_rotations(p)
    ]
    return Outcome(
        result={
            "alpha": p.alpha,
            "beta": p.beta,
            "shape": shape_classify(poly, cfg.tol).value,
            "vertices": poly.to_json(),
            "exact_rotations": exact,
            # the square of per-step kick amplitudes always contains the set
            "box_distance": hausdorff(poly, box(abs(p.alpha), abs(p.beta))),
        }
    )


def _replay(path: str) -> Outcome:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    body = data.get("result", data)
    certs = body.get("certificates") or ([body] if "grid_max" in body else [])
    if not certs:
        raise ValueError(f"{path} holds no certificate")
    rows = [replay_certificate(c) for c in certs]
    ok = all(r["within_tol"] for r in rows)
    return Outcome(result={"replayed": rows, "verdict": ok}, exit_code=EXIT_OK if ok else EXIT_NOT_CERTIFIED)


def run_certify(cfg: CertifyInput) -> Outcome:
    if cfg.replay:
        return _replay(cfg.replay)
    try:
        if cfg.which is not None:
            result = modelock_verify(cfg.which, cfg.step, cfg.target)
        else:
            p = Params(cfg.alpha, cfg.beta)
            cert = half_plane_confinement(p, cfg.v, cfg.u, cfg.c, cfg.power, cfg.step, cfg.target)
            result = certificate_to_json(cert)
            result["rotation_bound"] = cert.rotation_bound
    except NotCertified as exc:
        logger.info("not certified: %s", exc)
        return Outcome(
            result={"verdict": False, "reason": str(exc), "bound": jsonable(exc.bound)},
            exit_code=EXIT_NOT_CERTIFIED,
        )
    return Outcome(result=result, exit_code=EXIT_OK if result["verdict"] else EXIT_NOT_CERTIFIED)


def run_betaplus(cfg: BetaPlusInput) -> Outcome:
    budget = Budget(cfg.seeds, cfg.iters)
    rows = []
    for alpha in cfg.alphas:
        bound = BETA_PLUS_CONSTANT / math.sqrt(alpha)
        try:
            est = estimate_beta_minus_upper(alpha, 0.0, cfg.ceiling * bound, cfg.steps, budget, cfg.seed)
            beta, used = est.beta_minus_upper, est.budget
        except UpperEndpointNotDiffusive as exc:
            logger.warning("%s", exc)
            beta, used = None, None
        rows.append({"alpha": alpha, "beta_minus_upper": beta, "bound": bound, "iterations": used})
    missing = any(r["beta_minus_upper"] is None for r in rows)
    blob = _csv_bytes(
        ("alpha", "beta_minus_upper", "bound", "iterations"),
        [(_g(r["alpha"]), _g(r["beta_minus_upper"]), _g(r["bound"]), r["iterations"] or "") for r in rows],
    )
    return Outcome(
        result={"rows": rows},
        blobs={".csv": blob},
        exit_code=EXIT_NOT_CERTIFIED if missing else EXIT_OK,
    )


def run_euler(cfg: EulerInput) -> Outcome:
    rep = euler_convergence(cfg.lam, cfg.alphas, cfg.sample, cfg.seed)
    blob = _csv_bytes(
        ("delta", "sup_error_c0", "sup_error_c1"),
        [(_g(d), _g(e0), _g(e1)) for d, e0, e1 in zip(rep.deltas, rep.sup_errors_c0, rep.sup_errors_c1)],
    )
    return Outcome(result=jsonable(rep), blobs={".csv": blob})


def run_nontwist(cfg: NontwistInput) -> Outcome:
    if cfg.action == "convergence":
        dists = rescaling_convergence(cfg.alpha0, cfg.n_list)
        rows = [{"n": n, "alpha": cfg.alpha0 + n, "distance": d} for n, d in zip(cfg.n_list, dists)]
        blob = _csv_bytes(("n", "alpha", "distance"), [(r["n"], _g(r["alpha"]), _g(r["distance"])) for r in rows])
        return Outcome(result={"alpha0": cfg.alpha0, "rows": rows}, blobs={".csv": blob})

    rep = conjecture_rescaled_set(cfg.n, cfg.res, Budget(cfg.seeds, cfg.iters), cfg.seed, cfg.threads)
    return Outcome(
        result={
            "n": rep.n,
            "kappa": rep.kappa,
            "mismatch": rep.mismatch,
            "rescaled_counts": rep.e_grid.counts(),
            "nontwist_counts": rep.a_grid.counts(),
        },
        blobs={
            "-rescaled.csv": to_csv(rep.e_grid).encode("utf-8"),
            "-nontwist.csv": to_csv(rep.a_grid).encode("utf-8"),
            "-rescaled.ppm": to_ppm(render(rep.e_grid)),
            "-nontwist.ppm": to_ppm(render(rep.a_grid)),
        },
    )


def run_fixedpoints(cfg: FixedPointsInput) -> Outcome:
    p = Params(cfg.alpha, cfg.beta)
    reports = [jsonable(r) for r in fixed_points(p)]
    result = {"alpha": p.alpha, "beta": p.beta, "fixed_points": reports}
    if p.alpha * p.beta > 0:
        result["origin_closed_form"] = list(origin_eigenvalues(p))
    return Outcome(result=result)


def run_experiment(cfg: ExperimentInput) -> Outcome:
    p = Params(cfg.alpha, cfg.beta)
    budget = Budget(cfg.seeds, cfg.iters)
    if cfg.kind == "cusp":
        result = cusp_experiment(cfg.lam, cfg.alphas, budget, cfg.seed)
    elif cfg.kind == "monotonicity":
        result = {"rows": monotonicity_report(cfg.alphas, cfg.seeds, cfg.iters, cfg.seed, threads=cfg.threads)}
    elif cfg.kind == "continuity":
        worst = continuity_distance(
            p, cfg.radius, cfg.samples, cfg.seeds, cfg.iters, cfg.seed, one_sided=cfg.one_sided, threads=cfg.threads
        )
        result = {
            "alpha": p.alpha,
            "beta": p.beta,
            "radius": cfg.radius,
            "one_sided": cfg.one_sided,
            "hausdorff": worst,
        }
    elif cfg.kind == "drift":
        result = drift_check(p.alpha, p.beta, cfg.seeds, cfg.iters)
    else:
        result = {"alpha": p.alpha, "beta": p.beta, "mean_rotation": list(mean_rotation_vector(p))}
    return Outcome(result=jsonable(result))


COMMANDS: dict[str, tuple[Type[BaseModel], Callable[..., Outcome]]] = {
    "scan": (ScanInput, run_scan),
    "pixel": (ClassifyPixelInput, run_pixel),
    "rotset": (RotsetInput, run_rotset),
    "certify": (CertifyInput, run_certify),
    "betaplus": (BetaPlusInput, run_betaplus),
    "euler": (EulerInput, run_euler),
    "nontwist": (NontwistInput, run_nontwist),
    "fixedpoints": (FixedPointsInput, run_fixedpoints),
    "experiment": (ExperimentInput, run_experiment),
}


def _digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def run_command(command: str, cfg: BaseModel) -> tuple[RunReport, dict]:
    """Run one command; returns the report and {file name: bytes} for its data files."""
    _, runner = COMMANDS[command]
    out = runner(cfg)
    prefix = getattr(cfg, "prefix", "harper")
    blobs = {prefix + suffix: data for suffix, data in out.blobs.items()}
    result = dict(out.result)
    if out.blobs:
        result["outputs"] = {suffix: _digest(data) for suffix, data in out.blobs.items()}
    report = build_report(command, cfg, result, out.exit_code, files=[*blobs, prefix + ".json"])
    return report, blobs


def verify_report(path) -> tuple[bool, RunReport]:
    """Re-run the command recorded in a report JSON and compare its result."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    command = data["command"]
    if command not in COMMANDS:
        raise ValueError(f"unknown command {command!r} in {path}")
    model, _ = COMMANDS[command]
    cfg = model.model_validate(data["config"])
    fresh, _ = run_command(command, cfg)
    same_config = fresh.config_hash == data.get("config_hash")
    same_result = json.loads(canonical_json(fresh.result)) == data.get("result")
    if not same_config:
        logger.warning("config hash mismatch for %s", path)
    if not same_result:
        logger.warning("recomputed result differs from %s", path)
    return same_config and same_result, fresh


async def run_tool(command: str, params: BaseModel) -> str:
    """Run a command off the event loop and render it for an MCP client. Writes no files."""
    try:
        report, _ = await asyncio.to_thread(run_command, command, params)
    except (HarperError, ValueError, OSError) as exc:
        return f"Error ({type(exc).__name__}): {exc}"
    if getattr(params, "format", ResponseFormat.MARKDOWN) is ResponseFormat.JSON:
        return json.dumps({**report.to_dict(), "exit_code": report.exit_code}, indent=2)
    return report.format_output()
