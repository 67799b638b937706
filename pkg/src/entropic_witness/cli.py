"""Command-line entry point.

Exit codes: 0 success, 1 malformed input or bad arguments, 2 unphysical
state, 3 solver did not converge.

A flat ``key = value`` file passed with ``--config`` overrides the built-in
defaults of the chosen subcommand; explicit flags override the file.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from ._validation import ConvergenceError, DomainError
from .figures import FIGURE_IDS, make_figure, witness_summary, write_trajectory_csv
from .geometry import DEFAULT_SAMPLES, sample_fractions
from .reservoir import Lorentzian, OhmicClass, critical_p, evolve, lorentzian_trajectory, solve_volterra_p
from .states import CanonicalBloch, EwlSpec, from_canonical, is_physical, min_eigenvalue, state_from_dict
from .uncertainty import witness_report

EXIT_OK, EXIT_INPUT, EXIT_UNPHYSICAL, EXIT_SOLVER = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, message, code=EXIT_INPUT):
        super().__init__(message)
        self.code = code


def vec3(text):
    try:
        parts = [float(x) for x in text.replace(" ", "").split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected three comma-separated numbers, got {text!r}") from None
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected three comma-separated numbers, got {text!r}")
    return parts


def read_config(path):
    """Parse ``key = value`` lines; ``#`` starts a comment. Keys are normalised to flag dests."""
    cfg = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliError(f"{path}:{lineno}: expected key=value")
        key, value = (x.strip() for x in line.split("=", 1))
        cfg[key.lstrip("-").replace("-", "_")] = value
    return cfg


def _emit(text, out=None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _add_initial_flags(p):
    p.add_argument("--family", choices=("psi", "phi"), default="psi")
    p.add_argument("--purity", type=float, default=1.0, help="weight r of the pure component")
    p.add_argument("--alpha", type=float, default=float(1 / np.sqrt(2)))
    p.add_argument("--theta", type=float, default=0.0)


def _initial(args):
    return EwlSpec(args.family, args.purity, args.alpha, args.theta)


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------


def cmd_state(args):
    if args.json is not None:
        text = sys.stdin.read() if args.json == "-" else Path(args.json).read_text()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CliError(f"invalid JSON: {exc}") from None
        if "re" in data:
            rho = state_from_dict(data)
        else:
            rho = from_canonical(CanonicalBloch.from_dict(data))
    else:
        rho = from_canonical(CanonicalBloch(args.r, args.s, args.v))
    if not is_physical(rho):
        raise CliError(f"unphysical state: minimum eigenvalue {min_eigenvalue(rho):.6g}", EXIT_UNPHYSICAL)
    _emit(json.dumps(witness_report(rho).to_dict(), indent=2, sort_keys=True) + "\n", args.out)


def cmd_montecarlo(args):
    def progress(done, total):
        print(f"montecarlo: {done}/{total}", file=sys.stderr)

    report = sample_fractions(args.r, args.s, args.n, args.seed, n_jobs=args.jobs, progress=progress)
    _emit(report.to_json() + "\n", args.out)


def cmd_pcrit(args):
    initial = _initial(args)
    names = ("te", "me", "fe") if args.estimator == "all" else (args.estimator,)
    rows = [critical_p(initial, name).to_dict() for name in names]
    if args.format == "json":
        text = json.dumps({"initial": initial.to_dict(), "rows": rows}, indent=2, sort_keys=True) + "\n"
    else:
        lines = ["estimator,status,p_c,c_low,c_high"]
        for row in rows:
            vals = ["" if row[k] is None else repr(row[k]) for k in ("p_c", "c_low", "c_high")]
            lines.append(",".join([row["estimator"], row["status"], *vals]))
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)


def cmd_evolve(args):
    if args.model == "ohmic":
        step = 0.005 if args.step is None else args.step
        model = OhmicClass(args.s, args.eta, args.omega_c)
        traj = solve_volterra_p(model, args.t_max, step, tol=args.tol)
    else:
        step = 0.002 if args.step is None else args.step
        model = Lorentzian(args.lam, args.delta, args.gamma0)
        traj = lorentzian_trajectory(model, args.t_max, step)
    wtraj = evolve(_initial(args), traj)
    out = Path(args.out)
    write_trajectory_csv(out, wtraj)
    sidecar = {
        "model": model.to_dict(),
        "initial": wtraj.initial.to_dict(),
        "frame": traj.frame,
        "t_max": args.t_max,
        "step": traj.step,
        "witness": witness_summary(wtraj),
    }
    out.with_suffix(".json").write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    print(f"wrote {out} and {out.with_suffix('.json')}", file=sys.stderr)


def cmd_figures(args):
    ids = FIGURE_IDS if args.ids == ["all"] else args.ids
    for fig_id in ids:
        for path in make_figure(fig_id, args.outdir):
            print(path, file=sys.stderr)


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(prog="eurwitness", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--config", help="key=value file overriding defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("state", help="uncertainty report for one two-qubit state")
    p.add_argument("--json", help="state JSON file ({'re','im'} or {'r','s','v'}); '-' for stdin")
    p.add_argument("--r", type=vec3, default=[0.0, 0.0, 0.0], help="local vector of A, e.g. --r=0,0,0.25")
    p.add_argument("--s", type=vec3, default=[0.0, 0.0, 0.0], help="local vector of B")
    p.add_argument("--v", type=vec3, default=[0.0, 0.0, 0.0], help="diagonal correlations, e.g. --v=-1,-1,-1")
    p.add_argument("--out")
    p.set_defaults(func=cmd_state)

    p = sub.add_parser("montecarlo", help="volume fractions of the correlation-vector regions")
    p.add_argument("--r", type=vec3, default=[0.0, 0.0, 0.0])
    p.add_argument("--s", type=vec3, default=[0.0, 0.0, 0.0])
    p.add_argument("--n", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_montecarlo)

    p = sub.add_parser("pcrit", help="critical |p| for real p and the witnessed concurrence range")
    _add_initial_flags(p)
    p.add_argument("--estimator", choices=("all", "te", "me", "fe"), default="all")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_pcrit)

    p = sub.add_parser("evolve", help="trajectory CSV plus witness-interval sidecar JSON")
    p.add_argument("--model", choices=("ohmic", "lorentzian"), default="ohmic")
    p.add_argument("--s", type=float, default=1.0, help="Ohmic exponent (1/2 or a positive integer)")
    p.add_argument("--eta", type=float, default=0.01)
    p.add_argument("--omega-c", dest="omega_c", type=float, default=2.0, help="cutoff in units of omega0")
    p.add_argument("--lambda", dest="lam", type=float, default=0.1, help="Lorentzian width in units of gamma0")
    p.add_argument("--delta", type=float, default=0.0, help="detuning in units of gamma0")
    p.add_argument("--gamma0", type=float, default=1.0)
    _add_initial_flags(p)
    p.add_argument("--t-max", dest="t_max", type=float, default=10.0)
    p.add_argument("--step", type=float, default=None, help="default 0.005 (ohmic) or 0.002 (lorentzian)")
    p.add_argument("--tol", type=float, default=1e-6, help="step-halving tolerance of the ohmic solver")
    p.add_argument("--out", required=True, help="trajectory CSV path; the sidecar uses the .json suffix")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("figures", help="data files behind the figures")
    p.add_argument("ids", nargs="+", help=f"figure ids ({', '.join(FIGURE_IDS)}) or 'all'")
    p.add_argument("--outdir", default=".")
    p.set_defaults(func=cmd_figures)
    return parser


def _apply_config(parser, argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    cfg = read_config(known.config)
    sub_action = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    for sp in sub_action.choices.values():
        dests = {a.dest for a in sp._actions}
        sp.set_defaults(**{k: v for k, v in cfg.items() if k in dests})


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ConvergenceError as exc:
        print(f"error: {exc}; diagnostics: {exc.diagnostics}", file=sys.stderr)
        return EXIT_SOLVER
    except (DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
