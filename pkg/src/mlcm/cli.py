"""Command-line interface: ``mlcm {synth,combine,eval,bench}``.

Errors raised by the library are printed to stderr as a JSON object and the
process exits with status 1; usage errors exit with status 2.
"""

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .bench import METHODS, combine, render_markdown, run_bench
from .config import TIE_POLICIES, ConsensusConfig
from .exceptions import MLCMError, ValidationError
from .io import dumps_json, load_label_matrix, load_prediction_set, load_scores, save_json, save_label_matrix, save_scores
from .metrics import evaluate
from .synth import SynthSpec, generate_truth, simulate_base_models

logger = logging.getLogger("mlcm")


@dataclass(frozen=True)
class RunManifest:
    method: str
    inputs: tuple
    config: ConsensusConfig
    outputs: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValidationError(f"unknown method {self.method!r}; choose from {sorted(METHODS)}")
        missing = [str(p) for p in self.inputs if not Path(p).is_file()]
        if missing:
            raise ValidationError(f"input files not found: {missing}")


def _alpha(text):
    if text == "auto":
        return text
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or 'auto', got {text!r}") from None


def _seeds(text):
    """Parse ``"1-10"``, ``"1,2,5"`` or a mix like ``"1-3,7"``."""
    seeds = []
    try:
        for part in text.split(","):
            part = part.strip()
            if "-" in part:
                lo, hi = part.split("-")
                seeds.extend(range(int(lo), int(hi) + 1))
            elif part:
                seeds.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad seed list {text!r}") from None
    return seeds


def _add_config_flags(p):
    d = ConsensusConfig()
    p.add_argument("--alpha", type=_alpha, default=d.alpha,
                   help="label-node anchor strength, or 'auto' (default: %(default)s)")
    p.add_argument("--iters", type=int, default=d.iters, help="MLCM-a iterations (default: %(default)s)")
    p.add_argument("--tol", type=float, default=d.tol, help="MLCM-a early-stop tolerance")
    p.add_argument("--ridge", type=float, default=d.ridge, help="covariance diagonal loading")
    p.add_argument("--center", action="store_true", help="centered covariance in MLCM-a")


def _add_metric_flags(p):
    p.add_argument("--tie-policy", choices=TIE_POLICIES, default="strict")
    p.add_argument("--std-ap", action="store_true",
                   help="conventional average precision instead of the all-cutoffs variant")


def _config(args, seed=0):
    return ConsensusConfig(
        alpha=args.alpha,
        iters=args.iters,
        tol=args.tol,
        ridge=args.ridge,
        tie_policy=getattr(args, "tie_policy", "strict"),
        seed=seed,
        center=args.center,
    )


def _load_spec(path):
    if path is None:
        return SynthSpec()
    return SynthSpec.from_dict(json.loads(Path(path).read_text()))


def cmd_synth(args):
    spec = _load_spec(args.spec)
    overrides = {k: getattr(args, k) for k in ("n", "l", "prototypes") if getattr(args, k) is not None}
    if args.noise is not None or args.m is not None:
        m = args.m if args.m is not None else spec.m
        rate = args.noise if args.noise is not None else spec.model_noise[0]
        overrides["model_noise"] = (rate,) * m
    spec_dict = {**spec.to_dict(), **overrides, "seed": args.seed}
    spec = SynthSpec.from_dict(spec_dict)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    truth = generate_truth(spec)
    preds = simulate_base_models(truth, spec=spec)
    save_label_matrix(truth, out / "truth.csv")
    for k, Yk in enumerate(preds, start=1):
        save_label_matrix(Yk, out / f"pred_{k}.csv")
    save_json(spec.to_dict(), out / "spec.json")
    print(dumps_json({"out": str(out), "m": spec.m, "n": spec.n, "l": spec.l, "seed": spec.seed}))
    return 0


def cmd_combine(args):
    manifest = RunManifest(
        method=args.method,
        inputs=tuple(args.pred),
        config=_config(args, seed=args.seed),
        outputs=(args.out,),
    )
    preds = load_prediction_set(manifest.inputs)
    scores = combine(manifest.method, preds, manifest.config)
    save_scores(scores, args.out)
    print(dumps_json({
        "method": manifest.method,
        "inputs": list(manifest.inputs),
        "out": args.out,
        "config": manifest.config.to_dict(),
    }))
    return 0


def cmd_eval(args):
    truth = load_label_matrix(args.truth)
    scores = load_scores(args.scores)
    rep = evaluate(scores, truth, args.tie_policy, args.std_ap)
    report = {
        "method": args.method,
        "metrics": rep.metrics(),
        "config": {"tie_policy": args.tie_policy, "std_ap": args.std_ap},
        "seed": args.seed,
        "skipped_instances": rep.skipped_instances,
    }
    if args.out:
        save_json(report, args.out)
    print(dumps_json(report))
    return 0


def cmd_bench(args):
    spec = _load_spec(args.spec)
    config = _config(args)
    result = run_bench(spec, args.seeds, args.methods, config, std_ap=args.std_ap)
    table = render_markdown(result)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        save_json(result, out / "bench.json")
        (out / "bench.md").write_text(table + "\n")
    print(table)
    return 1 if result["failures"] else 0


def build_parser():
    parser = argparse.ArgumentParser(prog="mlcm", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="write synthetic truth and base-model predictions")
    p.add_argument("--spec", help="SynthSpec JSON file")
    p.add_argument("--n", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--prototypes", type=int)
    p.add_argument("--noise", type=float, help="flip rate applied to every model")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("combine", help="combine base-model predictions into scores")
    p.add_argument("--method", required=True, choices=sorted(METHODS))
    p.add_argument("--pred", nargs="+", required=True, help="one CSV per base model, in order")
    p.add_argument("--out", required=True, help="score CSV to write")
    p.add_argument("--seed", type=int, default=0)
    _add_config_flags(p)
    p.set_defaults(func=cmd_combine)

    p = sub.add_parser("eval", help="evaluate a score file against ground truth")
    p.add_argument("--scores", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--method", default="scores", help="label stored in the report")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="report JSON to write")
    _add_metric_flags(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("bench", help="seeded synthetic comparison of all methods")
    p.add_argument("--spec", help="SynthSpec JSON file (default: built-in defaults)")
    p.add_argument("--seeds", type=_seeds, default=list(range(1, 11)),
                   help="e.g. 1-10 or 1,4,9 (default: 1-10)")
    p.add_argument("--methods", type=lambda s: [x.strip() for x in s.split(",") if x.strip()],
                   default=list(METHODS), help="comma-separated (default: all)")
    p.add_argument("--out", help="directory for bench.json and bench.md")
    _add_config_flags(p)
    _add_metric_flags(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (MLCMError, OSError, json.JSONDecodeError) as exc:
        if isinstance(exc, MLCMError):
            err = exc.to_dict()
        elif isinstance(exc, OSError):
            err = {"error": "io_error", "message": str(exc)}
        else:
            err = {"error": "parse_error", "message": str(exc)}
        print(json.dumps(err, sort_keys=True), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
