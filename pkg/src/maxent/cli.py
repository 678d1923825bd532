"""Command-line front end: ``maxent <command> [flags]``.

Exit status is 0 on success, 2 when a solve ran but missed its delta1
target (outputs are still written), and 1 for usage or file errors.
"""

import argparse
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import corpus, csvio, diagnostics, logistic, pipeline
from .basis import BasisKind, build_basis_matrix
from .errors import DomainError, SolverError
from .quadrature import build_gauss_legendre
from .solver import SolverConfig, StepStrategy

log = logging.getLogger("maxent")

EXIT_OK, EXIT_USAGE, EXIT_NOT_CONVERGED = 0, 1, 2
SOURCES = corpus.FUNCTION_IDS + ("logistic", "file")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_source(p, need_m=True):
    p.add_argument("--function", required=True, choices=SOURCES,
                   help="corpus function id, 'logistic', or 'file'")
    p.add_argument("--moments", dest="M", type=int, required=False,
                   help="highest moment index M" + (" (required unless --function file)" if need_m else ""))
    p.add_argument("--moments-path", help="i,mu CSV read when --function file")
    p.add_argument("--reference", choices=corpus.FUNCTION_IDS,
                   help="exact function to compare against when --function file")
    p.add_argument("--basis", default="chebyshev", choices=["chebyshev", "power"])


def _add_nodes(p):
    p.add_argument("--nodes", type=int, default=192, help="Gauss-Legendre rule size n_g")


def _add_solver(p):
    g = p.add_argument_group("solver")
    d = SolverConfig()
    g.add_argument("--max-iterations", type=int, default=d.max_iterations)
    g.add_argument("--delta1-target", type=float, default=d.delta1_target)
    g.add_argument("--step-strategy", default=d.step_strategy.value,
                   choices=[s.value for s in StepStrategy])
    g.add_argument("--exponent-cap", type=float, default=d.exponent_cap)
    g.add_argument("--verbose-every", type=int, default=0)
    g.add_argument("--gap-epsilon", type=float, default=None,
                   help="report a gap estimate at this threshold")


def _add_logistic(p):
    g = p.add_argument_group("logistic map")
    d = logistic.LogisticConfig()
    g.add_argument("--gamma", type=float, default=d.gamma)
    g.add_argument("--ensemble-size", type=int, default=d.ensemble_size)
    g.add_argument("--transient-steps", type=int, default=d.transient_steps)
    g.add_argument("--sample-steps", type=int, default=d.sample_steps)
    g.add_argument("--bins", type=int, default=d.histogram_bins)
    g.add_argument("--seed", type=int, default=d.rng_seed)


def _add_out(p):
    p.add_argument("--out-dir", default=".", help="directory for output files")


def build_parser():
    parser = _Parser(prog="maxent", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("reconstruct", help="solve for one moment set; writes recon.csv and report.txt")
    _add_source(p)
    _add_nodes(p)
    _add_solver(p)
    _add_logistic(p)
    _add_out(p)

    p = sub.add_parser("moments", help="write moments.csv for a corpus function or the logistic map")
    _add_source(p)
    _add_logistic(p)
    _add_out(p)

    p = sub.add_parser("sweep", help="reconstruct over a list of M; writes sweep.csv")
    _add_source(p, need_m=False)
    p.add_argument("--m-list", required=True, help="comma-separated moment orders, e.g. 10,40,80,120")
    _add_nodes(p)
    _add_solver(p)
    _add_logistic(p)
    _add_out(p)

    p = sub.add_parser("logistic-gen", help="write moments.csv and histogram.csv for the logistic map")
    p.add_argument("--moments", dest="M", type=int, required=True)
    _add_logistic(p)
    _add_out(p)

    p = sub.add_parser("diagnose", help="recompute diagnostics from saved files")
    p.add_argument("--recon-path", required=True)
    p.add_argument("--moments-path", required=True)
    p.add_argument("--basis", default="chebyshev", choices=["chebyshev", "power"])
    p.add_argument("--reference", choices=corpus.FUNCTION_IDS)
    p.add_argument("--histogram-path")
    p.add_argument("--gap-epsilon", type=float, default=None)
    _add_out(p)
    return parser


def _solver_config(args):
    return SolverConfig(
        max_iterations=args.max_iterations,
        delta1_target=args.delta1_target,
        step_strategy=args.step_strategy,
        exponent_cap=args.exponent_cap,
        verbose_every=args.verbose_every,
    )


def _logistic_config(args):
    return logistic.LogisticConfig(
        gamma=args.gamma,
        ensemble_size=args.ensemble_size,
        transient_steps=args.transient_steps,
        sample_steps=args.sample_steps,
        histogram_bins=args.bins,
        rng_seed=args.seed,
    )


def _out_dir(args):
    path = args.out_dir
    try:
        os.makedirs(path, exist_ok=True)
    except OSError as exc:
        raise csvio.ArtifactError(f"cannot create output directory {path}: {exc.strerror}") from None
    if not os.access(path, os.W_OK):
        raise csvio.ArtifactError(f"output directory {path} is not writable")
    return path


def _source(args, M=None):
    """Resolve moments and the reference for the requested source.

    Returns (mu, reference, histogram); ``reference`` is a TestFunction, a
    callable, or None.
    """
    kind = BasisKind.parse(args.basis)
    M = args.M if M is None else M
    if args.function == "file":
        if not args.moments_path:
            raise UsageError("--function file requires --moments-path")
        mu = csvio.read_moments(args.moments_path, kind)
        if M is not None:
            mu = mu.truncated(M)
        ref = corpus.get(args.reference) if args.reference else None
        return mu, ref, None
    if M is None:
        raise UsageError("--moments is required")
    if args.function == "logistic":
        if kind is not BasisKind.CHEBYSHEV:
            raise UsageError("logistic moments are Chebyshev moments only")
        mu, hist = logistic.generate(_logistic_config(args), M)
        return mu, hist.at, hist
    f = corpus.get(args.function)
    return pipeline.reference_moments(f, M, kind), f, None


def _recon_items(run):
    items = pipeline.solver_items(run.recon)
    if run.report is not None:
        # the solver already reported delta1
        items += [
            tuple(line.split("=", 1)) for line in run.report.to_lines()
            if not line.startswith("delta1=")
        ]
    return items


def cmd_reconstruct(args):
    out = _out_dir(args)
    mu, ref, hist = _source(args)
    run = pipeline.reconstruct(mu, args.nodes, _solver_config(args), ref, args.gap_epsilon)
    csvio.write_reconstruction(os.path.join(out, "recon.csv"), run.rule.nodes, run.recon.rho, run.f_exact)
    csvio.write_atomic(os.path.join(out, "report.txt"), _report_text(_recon_items(run)))
    if hist is not None:
        csvio.write_histogram(os.path.join(out, "histogram.csv"), hist)
    log.info("reconstruct: %d iterations, delta1=%.3e", run.recon.iterations_used, run.recon.delta1_achieved)
    return EXIT_OK if run.recon.converged else EXIT_NOT_CONVERGED


def _report_text(items):
    return "".join(f"{k}={v if isinstance(v, str) else csvio.fmt(v)}\n" for k, v in items)


def cmd_moments(args):
    out = _out_dir(args)
    mu, _, hist = _source(args)
    csvio.write_moments(os.path.join(out, "moments.csv"), mu)
    if hist is not None:
        csvio.write_histogram(os.path.join(out, "histogram.csv"), hist)
    return EXIT_OK


def _threads():
    raw = os.environ.get("MAXENT_THREADS", "")
    try:
        return max(1, int(raw)) if raw else max(1, os.cpu_count() or 1)
    except ValueError:
        raise UsageError(f"MAXENT_THREADS must be an integer, got {raw!r}") from None


def cmd_sweep(args):
    out = _out_dir(args)
    try:
        m_list = [int(tok) for tok in args.m_list.split(",") if tok.strip()]
    except ValueError:
        raise UsageError(f"--m-list must be comma-separated integers, got {args.m_list!r}") from None
    if not m_list:
        raise UsageError("--m-list is empty")
    mu_full, ref, hist = _source(args, M=max(m_list))
    if ref is None:
        raise UsageError("sweep needs a reference function for its diagnostics (--reference)")
    cfg = _solver_config(args)
    eps = args.gap_epsilon
    if eps is None and isinstance(ref, corpus.TestFunction) and ref.id is corpus.FunctionId.DOUBLE_PARABOLA:
        eps = diagnostics.DEFAULT_GAP_EPSILON

    def point(M):
        run = pipeline.reconstruct(mu_full.truncated(M), args.nodes, cfg, ref, eps)
        csvio.write_reconstruction(
            os.path.join(out, f"recon_M{M}.csv"), run.rule.nodes, run.recon.rho, run.f_exact
        )
        return run

    with ThreadPoolExecutor(max_workers=min(_threads(), len(m_list))) as pool:
        runs = list(pool.map(point, m_list))

    rows = []
    for M, run in zip(m_list, runs):
        r = run.report
        rows.append((
            args.function, M, args.nodes, r.delta1, r.delta2, r.entropy, r.d_kl, r.d_v,
            r.kl_lower_bound, r.gap.width if r.gap is not None else float("nan"),
        ))
    csvio.write_atomic(os.path.join(out, "sweep.csv"), csvio.sweep_text(rows))
    if hist is not None:
        csvio.write_histogram(os.path.join(out, "histogram.csv"), hist)
    return EXIT_OK if all(run.recon.converged for run in runs) else EXIT_NOT_CONVERGED


def cmd_logistic_gen(args):
    out = _out_dir(args)
    mu, hist = logistic.generate(_logistic_config(args), args.M)
    csvio.write_moments(os.path.join(out, "moments.csv"), mu)
    csvio.write_histogram(os.path.join(out, "histogram.csv"), hist)
    return EXIT_OK


def cmd_diagnose(args):
    out = _out_dir(args)
    x, rho, f_saved = csvio.read_reconstruction(args.recon_path)
    mu = csvio.read_moments(args.moments_path, BasisKind.parse(args.basis))
    rule = build_gauss_legendre(x.size)
    if not np.allclose(rule.nodes, x, rtol=0, atol=1e-15):
        raise csvio.ArtifactError(
            f"{args.recon_path}: x column is not the {x.size}-point Gauss-Legendre rule"
        )
    matrix = build_basis_matrix(mu.kind, mu.order, rule)
    if args.reference:
        f_exact = corpus.nodal_values(corpus.get(args.reference), rule)
    elif args.histogram_path:
        f_exact = csvio.read_histogram(args.histogram_path).at(rule.nodes)
    elif f_saved is not None:
        f_exact = f_saved
    else:
        raise UsageError("diagnose needs an f_exact column, --reference or --histogram-path")
    report = diagnostics.diagnose(mu, rho, matrix, rule, f_exact, args.gap_epsilon)
    text = "".join(line + "\n" for line in report.to_lines())
    csvio.write_atomic(os.path.join(out, "diagnostics.txt"), text)
    sys.stdout.write(text)
    return EXIT_OK


COMMANDS = {
    "reconstruct": cmd_reconstruct,
    "moments": cmd_moments,
    "sweep": cmd_sweep,
    "logistic-gen": cmd_logistic_gen,
    "diagnose": cmd_diagnose,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose or getattr(args, "verbose_every", 0) else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except csvio.ArtifactError as exc:
        print(f"maxent: {exc}", file=sys.stderr)
    except UsageError as exc:
        print(f"maxent: usage error: {exc}", file=sys.stderr)
    except SolverError as exc:
        print(f"maxent: solver aborted: {exc}", file=sys.stderr)
    except DomainError as exc:
        print(f"maxent: {exc}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
