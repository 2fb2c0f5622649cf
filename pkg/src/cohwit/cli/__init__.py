"""Command line front end.

Every subcommand prints one JSON document on stdout. Exit codes: 0 success,
1 validation or library error, 2 marginal or degenerate-boundary verdict,
3 I/O or parse error. Human-readable diagnostics go to stderr.
"""
import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .. import comparability, matcore, sampling, witness
from ..robustness import robustness as solve_robustness
from ..errors import CohwitError, ParseError, PreconditionViolated
from .matrixfile import MatrixFile, dumps, read_matrix_file

EXIT_OK, EXIT_INVALID, EXIT_UNDECIDED, EXIT_IO = 0, 1, 2, 3
UNDECIDED = {"Marginal", "DegenerateBoundary"}


def _load(path, expected=None):
    mf = read_matrix_file(path)
    if expected is not None and mf.kind != expected:
        raise ParseError(f"{path}: expected kind {expected!r}, found {mf.kind!r}", field="kind")
    if mf.kind == "state":
        return mf.kind, matcore.density_matrix(mf.matrix)
    if mf.kind == "witness":
        return mf.kind, witness.validate_witness(mf.matrix)
    return mf.kind, matcore.hermitian(mf.matrix)


def cmd_validate(args):
    kind, obj = _load(args.path)
    out = {"kind": kind, "valid": True}
    if kind == "state":
        out["coherent"] = witness.is_coherent(obj)
        out["coherence_weight"] = witness.coherence_weight(obj)
    elif kind == "witness":
        out["optimal"] = witness.is_optimal(obj)
        out["normalized"] = obj.normalized
        out["min_eigenvalue"] = matcore.min_eigenpair(obj.mat)[0]
    else:
        out["eigenvalues"] = matcore.eig_hermitian(obj).eigenvalues
    return out, EXIT_OK


def _pure_vector(rho):
    w, v = np.linalg.eigh(rho)
    if w[-1] < 1 - 1e-9:
        raise PreconditionViolated("projector construction needs a pure state")
    psi = v[:, -1]
    # fix the global phase so the largest entry is real and positive
    k = int(np.argmax(np.abs(psi)))
    return psi * (abs(psi[k]) / psi[k])


def cmd_construct(args):
    _, rho = _load(args.state, "state")
    if args.method == "projector":
        w = witness.construct_projector_witness(_pure_vector(rho))
    elif args.method == "geometric":
        w = witness.construct_geometric_witness(rho)
    else:
        w = witness.construct_dephasing_witness(rho)
    if args.normalize:
        w = witness.normalize(w)
    return MatrixFile("witness", np.asarray(w.mat)).to_dict(), EXIT_OK


def cmd_detect(args):
    _, w = _load(args.witness, "witness")
    _, rho = _load(args.state, "state")
    tol = witness.DETECT_TOL if args.tol is None else args.tol
    return witness.detect(w, rho, tol=tol), EXIT_OK


def cmd_compare_witnesses(args):
    ws = [_load(p, "witness")[1] for p in args.paths]
    verdict = comparability.compare_witnesses(ws, seed=args.seed, budget=args.budget)
    code = EXIT_UNDECIDED if verdict.verdict.value in UNDECIDED else EXIT_OK
    return verdict, code


def cmd_compare_states(args):
    rhos = [_load(p, "state")[1] for p in args.paths]
    if len(rhos) == 2:
        verdict = comparability.compare_two_states(*rhos)
    else:
        verdict = comparability.compare_states(rhos)
    code = EXIT_UNDECIDED if verdict.verdict.value in UNDECIDED else EXIT_OK
    return verdict, code


def cmd_robustness(args):
    _, rho = _load(args.state, "state")
    res = solve_robustness(rho)
    code = EXIT_OK if res.converged else EXIT_UNDECIDED
    return res, code


def cmd_random(args):
    rng = np.random.default_rng(args.seed)
    d = args.dim
    if d < 2:
        raise ParseError("dim must be at least 2", field="dim")
    if args.kind == "state":
        mf = MatrixFile("state", sampling.random_density_matrix(d, rng))
    elif args.kind == "pure":
        mf = MatrixFile("state", sampling.haar_pure_state(d, rng))
    elif args.kind == "incoherent":
        mf = MatrixFile("state", sampling.random_incoherent_state(d, rng))
    elif args.kind == "witness":
        mf = MatrixFile("witness", sampling.random_witness(d, rng))
    else:
        mf = MatrixFile("hermitian", sampling.random_hermitian(d, rng))
    return mf.to_dict(), EXIT_OK


BATCH_OPS = {"validate": cmd_validate, "robustness": cmd_robustness}


def cmd_batch(args):
    files = sorted(Path(args.dir).glob("*.json"))
    op = BATCH_OPS[args.op]

    def one(path):
        sub = argparse.Namespace(**vars(args), path=str(path), state=str(path))
        return _run(op, sub)

    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        outcomes = list(pool.map(one, files))
    results = {p.name: body for p, (body, _) in zip(files, outcomes)}
    code = max((c for _, c in outcomes), default=EXIT_OK)
    return {"op": args.op, "results": results}, code


def _run(func, args):
    try:
        return func(args)
    except ParseError as exc:
        return exc.to_dict(), EXIT_IO
    except CohwitError as exc:
        return exc.to_dict(), EXIT_INVALID


def _global_flags(parser, suppress):
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--tol", type=float, default=default(None),
                        help="detection threshold on tr(W rho) (default 1e-9)")
    parser.add_argument("--seed", type=int, default=default(0), help="seed for anything randomized")
    parser.add_argument("--budget", type=int, default=default(comparability.BUDGET),
                        help="iteration cap for the comparability solvers")


def build_parser():
    parser = argparse.ArgumentParser(prog="cohwit", description=__doc__.splitlines()[0])
    _global_flags(parser, suppress=False)
    # the same flags after the subcommand override the ones before it
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    p = add("validate", help="check a matrix file against its kind")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    p = add("construct", help="build a witness for a state")
    p.add_argument("method", choices=["projector", "geometric", "dephasing"])
    p.add_argument("state")
    p.add_argument("--normalize", action="store_true", help="scale to operator norm 1")
    p.set_defaults(func=cmd_construct)

    p = add("detect", help="evaluate tr(W rho)")
    p.add_argument("witness")
    p.add_argument("state")
    p.set_defaults(func=cmd_detect)

    p = add("compare-witnesses", help="do the witnesses detect a common state?")
    p.add_argument("paths", nargs="+")
    p.set_defaults(func=cmd_compare_witnesses)

    p = add("compare-states", help="do the states admit a common witness?")
    p.add_argument("paths", nargs="+")
    p.set_defaults(func=cmd_compare_states)

    p = add("robustness", help="robustness of coherence of a state")
    p.add_argument("state")
    p.set_defaults(func=cmd_robustness)

    p = add("random", help="write a seeded random matrix file")
    p.add_argument("kind", choices=["state", "pure", "incoherent", "witness", "hermitian"])
    p.add_argument("dim", type=int)
    p.set_defaults(func=cmd_random)

    p = add("batch", help="run an operation over every *.json file in a directory")
    p.add_argument("dir")
    p.add_argument("--op", choices=sorted(BATCH_OPS), default="validate")
    p.add_argument("--jobs", type=int, default=4)
    p.set_defaults(func=cmd_batch)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    body, code = _run(args.func, args)
    sys.stdout.write(dumps(body))
    if isinstance(body, dict) and "error" in body:
        print(f"cohwit: {body['error']}: {body['detail']}", file=sys.stderr)
    elif code != EXIT_OK:
        print(f"cohwit: finished with exit code {code}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
