"""Command-line entry point: ``lamplighter <subcommand> [flags]``.

Every run writes one JSON document holding a ``schema_version``, a ``header``
with the timestamp, the full run ``config`` and the ``result``. Identical
configs give identical ``config`` and ``result`` sections. Failures exit with
the error's code and print a JSON error object.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from . import abelian_lp as ab
from . import analysis as an
from . import embedding as em
from . import group as grp
from . import lower_bounds as lb
from . import word_metric as wm
from .errors import CommandError, LamplighterError, SizeGuardError, UsageError

SCHEMA_VERSION = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        if "invalid choice" in message and self.prog.split()[-1] == "lamplighter":
            raise CommandError(message)
        raise UsageError(f"{self.prog}: {message}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _jsonable(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _gens(args) -> wm.GeneratorSet:
    movement = tuple(args.gens) if args.gens else (1,)
    return wm.GeneratorSet(args.n, movement, not args.no_toggle)


# --- subcommands -------------------------------------------------------------


def cmd_word_metric_check(args) -> dict:
    n = args.n
    gens = _gens(args)
    table = wm.bfs_table(n, gens)
    x, j = grp.all_element_arrays(n)
    rho = table.dist.astype(np.int64)
    lamps = grp.popcount_array(x)
    result = {
        "order": table.order,
        "lamp_bound_violations": int(np.sum(rho < lamps)),
    }
    standard = gens.movement == (1,) and gens.toggle
    sigma = None
    if standard:
        fast = wm.travel_metric_batch(x, j, n)
        bad = np.flatnonzero(fast != rho)
        result["oracle_equivalence"] = {
            "checked": int(rho.size),
            "mismatches": int(bad.size),
            "first_mismatch": None if not bad.size else repr(grp.GroupElement.from_index(int(bad[0]), n)),
            "passed": bool(bad.size == 0),
        }
        sigma = wm.surrogate_sigma_batch(x, j, n)
        ratio = rho[1:] / sigma[1:]
        result["band"] = {
            "min_ratio": float(ratio.min()),
            "max_ratio": float(ratio.max()),
            "lower": 0.4,
            "upper": 6.0,
            "passed": bool(ratio.min() >= 0.4 and ratio.max() <= 6.0),
        }
    else:
        result["oracle_equivalence"] = None
        result["band"] = None
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            fh.write(f"# schema_version={SCHEMA_VERSION}\n")
            w.writerow(["lamps", "pos", "rho"] + (["sigma"] if sigma is not None else []))
            for i in range(rho.size):
                row = [" ".join(map(str, grp.lamp_members(int(x[i]), n))), int(j[i]), int(rho[i])]
                if sigma is not None:
                    row.append(int(sigma[i]))
                w.writerow(row)
    return result


def cmd_embed_distortion(args) -> dict:
    n = args.n
    gens = _gens(args)
    if (args.eta is None) != (args.delta is None):
        raise UsageError("--eta and --delta go together")
    if args.eta is None:
        params = em.EmbeddingParams.default(n, args.alpha)
    else:
        params = em.EmbeddingParams.from_raw(n, args.eta, args.delta, alpha=args.alpha)
    mode, count = (args.mode, args.count) if args.sample is None else ("sampled", args.sample)
    scan = an.embedding_distortion(params, gens, mode=mode, count=count, seed=args.seed,
                                   workers=args.threads)
    rep = scan.report
    return {
        "distortion": rep.distortion,
        "expansion": rep.expansion,
        "contraction": rep.contraction,
        "witnesses": scan.witnesses(),
        "ratio_to_sqrt_log_n": rep.distortion / math.sqrt(math.log(n)),
        "pairs": rep.pairs,
        "mode": rep.mode,
        "params": {"eta": params.eta, "delta": params.delta, "arc_len": params.arc_len, "alpha": params.alpha},
    }


def cmd_lower_bound(args) -> dict:
    n = args.n
    gens = _gens(args)
    if n <= wm.BFS_MAX_N:
        source, moments = "bfs", wm.bfs_table(n, gens).moments()
    else:
        if not (gens.movement == (1,) and gens.toggle):
            raise UsageError(f"n={n} exceeds the BFS guard; only the standard generators have exact moments there")
        source, moments = "transfer", wm.standard_moments(n)
    listed = lb.listed_rayleigh_min(gens)
    return {
        "bound": lb.lemma32_bound(moments, gens),
        "moments": {"order": str(moments[0]), "sum": str(moments[1]), "sum_sq": str(moments[2]),
                    "source": source},
        "rayleigh_min": listed.value,
        "minimizer": str(listed.label),
        "character_min": listed.character_min,
        "walsh_min": listed.walsh_min,
        "list_relative": True,
    }


def cmd_zigzag(args) -> dict:
    n = args.n
    count = args.count or lb.default_generator_count(n, args.log_base)
    rows = []
    for i in range(args.seeds):
        seed = args.seed + i
        S = lb.sample_generators(n, count, seed)
        r = lb.prop34_bound(n, S, args.mode, args.log_base)
        row = {"seed": seed, **r.to_dict()}
        row["d_lower_over_sqrt_n"] = r.d_lower / math.sqrt(n)
        rows.append(row)
    return {"count": count, "threshold": 100.0 * math.log(n) / math.log(args.log_base), "rows": rows}


def _metric_from_args(args) -> ab.InvariantMetric:
    if (args.moduli is None) == (args.cycle is None):
        raise UsageError("give exactly one of --moduli and --cycle")
    spec = ab.AbelianGroupSpec(tuple(args.moduli)) if args.moduli else ab.AbelianGroupSpec.cycle(args.cycle)
    kind = args.metric
    if kind == "hamming":
        if set(spec.moduli) != {2}:
            raise UsageError("the Hamming metric needs moduli 2,2,...,2")
        return ab.InvariantMetric.hamming(len(spec.moduli))
    if kind == "cycle":
        if len(spec.moduli) != 1:
            raise UsageError("the cycle metric needs a single cyclic factor")
        return ab.InvariantMetric.cycle(spec.moduli[0])
    if kind.startswith("file:"):
        return ab.InvariantMetric.from_csv(kind[5:], spec)
    raise UsageError(f"unknown metric {kind!r}; use hamming, cycle or file:<path>")


def cmd_abelian_lp(args) -> dict:
    metric = _metric_from_args(args)
    metric.validate()
    w = ab.fourier_weights(metric)
    nt = ab.negative_type_test(w)
    out = {
        "order": metric.spec.order,
        "exponent": metric.spec.exponent,
        "negative_type": nt.passed,
        "min_weight": nt.weight,
        "witness": list(nt.witness) if nt.witness else None,
        "weights": np.round(w.a.ravel(), 15).tolist() if metric.spec.order <= 256 else None,
    }
    out["gl"] = ab.gl_check(metric, args.p).to_dict() if nt.passed else None
    return out


def _read_points(path) -> tuple[int, np.ndarray]:
    try:
        data = json.loads(Path(path).read_text())
        n = int(data["n"])
        items = data["points"]
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read point map {path}: {exc}") from None
    order = grp.group_order(n)
    if order > an.SYMMETRIZE_MAX_ORDER:
        raise SizeGuardError(f"symmetrize guard: n*2**n={order} exceeds {an.SYMMETRIZE_MAX_ORDER}")
    dim = None
    points = None
    seen = np.zeros(order, dtype=bool)
    for item in items:
        g = grp.GroupElement.from_members(item["lamps"], int(item["pos"]), n)
        vec = np.asarray(item["vector"], dtype=float)
        if dim is None:
            dim = vec.size
            points = np.zeros((order, dim))
        if vec.size != dim:
            raise UsageError("all vectors must have the same length")
        if seen[g.index]:
            raise UsageError(f"element {g!r} listed twice")
        seen[g.index] = True
        points[g.index] = vec
    if points is None or not seen.all():
        raise UsageError(f"the point map must cover all {order} elements")
    return n, points


def cmd_symmetrize(args) -> dict:
    n, points = _read_points(args.input)
    mul = grp.multiplication_table(n)
    inv = grp.inverse_table(n)
    sym = an.symmetrize(points, mul, inv)
    table = wm.bfs_table(n)
    D = table.dist[mul[inv]].astype(float)  # D[a, b] = rho(a^-1 b, e)
    keep = np.real(np.linalg.eigvalsh(sym.kernel)) > 1e-12 * max(sym.trace, 1e-300)
    coords = np.real_if_close(sym.coords[:, keep])
    result = {
        "n": n,
        "psd": sym.psd,
        "min_eigenvalue": sym.min_eigenvalue,
        "trace": sym.trace,
        "degenerate": sym.degenerate,
        "points": [{"lamps": grp.GroupElement.from_index(i, n).members,
                    "pos": grp.GroupElement.from_index(i, n).pos,
                    "vector": np.real(coords[i]).tolist()} for i in range(points.shape[0])],
    }
    if not sym.degenerate:
        before = an.distortion_scan(an.matrix_oracle(D), an.points_oracle(points), len(points))
        after = an.distortion_scan(an.matrix_oracle(D), an.points_oracle(np.real(sym.coords)), len(points))
        result["distortion_before"] = before.distortion
        result["distortion_after"] = after.distortion
    return result


COMMANDS = {
    "word-metric-check": cmd_word_metric_check,
    "embed-distortion": cmd_embed_distortion,
    "lower-bound": cmd_lower_bound,
    "zigzag": cmd_zigzag,
    "abelian-lp": cmd_abelian_lp,
    "symmetrize": cmd_symmetrize,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", type=Path, help="write the JSON report here instead of stdout")
    common.add_argument("--threads", type=int, default=1, help="worker threads for scans")
    common.add_argument("--seed", type=int, default=0, help="base seed for sampling")

    gen = _Parser(add_help=False)
    gen.add_argument("--n", type=int, required=True, help="cycle length")
    gen.add_argument("--gens", type=_int_list, help="movement steps, e.g. 1,3 (default 1)")
    gen.add_argument("--no-toggle", action="store_true", help="leave out the lamp toggle")

    parser = _Parser(prog="lamplighter", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("word-metric-check", parents=[common, gen], help="BFS against the closed-form metric")
    p.add_argument("--csv", type=Path, help="per-element dump of rho (and sigma)")

    p = sub.add_parser("embed-distortion", parents=[common, gen], help="distortion of the arc embedding")
    p.add_argument("--mode", choices=["exact", "sampled"], default="exact")
    p.add_argument("--count", type=int, default=1_000_000, help="sampled elements")
    p.add_argument("--sample", type=int, help="shorthand for --mode sampled --count M")
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--eta", type=float, help="raw eta (with --delta); defaults depend on n")
    p.add_argument("--delta", type=float)

    sub.add_parser("lower-bound", parents=[common, gen], help="representation-averaging lower bound")

    p = sub.add_parser("zigzag", parents=[common], help="spectral lower bound with random movement sets")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count", type=int, help="movement-set size (default ceil(100 log n))")
    p.add_argument("--seeds", type=int, default=1)
    p.add_argument("--mode", choices=["exact", "estimate"], default="estimate")
    p.add_argument("--log-base", type=float, default=math.e)

    p = sub.add_parser("abelian-lp", parents=[common], help="character embeddings of invariant metrics")
    p.add_argument("--moduli", type=_int_list)
    p.add_argument("--cycle", type=int)
    p.add_argument("--metric", default="cycle", help="hamming, cycle or file:<path>")
    p.add_argument("--p", type=float, default=1.0)

    p = sub.add_parser("symmetrize", parents=[common], help="average an embedding over the group")
    p.add_argument("--input", type=Path, required=True)
    return parser


def _config(args) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k != "out"}
    cfg["out"] = str(args.out) if args.out else None
    return cfg


def _emit(doc: dict, out: Path | None) -> None:
    text = json.dumps(doc, sort_keys=True, indent=2, default=_jsonable, allow_nan=False)
    if out is None:
        sys.stdout.write(text + "\n")
    else:
        out.write_text(text + "\n")


def run(argv=None) -> int:
    args = None
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("missing subcommand; see lamplighter --help")
        if args.threads < 1:
            raise UsageError("--threads must be at least 1")
        result = COMMANDS[args.command](args)
        doc = {
            "schema_version": SCHEMA_VERSION,
            "header": {"created": datetime.now(timezone.utc).isoformat(), "version": __version__},
            "config": _config(args),
            "result": result,
        }
        _emit(doc, args.out)
        return 0
    except LamplighterError as exc:
        err = {
            "schema_version": SCHEMA_VERSION,
            "error": {"code": exc.code, "type": type(exc).__name__, "message": str(exc)},
        }
        if args is not None and getattr(args, "command", None):
            err["config"] = _config(args)
        sys.stdout.write(json.dumps(err, sort_keys=True, default=_jsonable) + "\n")
        return exc.code


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
