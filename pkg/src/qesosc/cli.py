"""Command-line front end: ``qesosc {solve,verify,export,bethe}``.

Exit codes: 0 success, 2 usage/parse error or missing state, 3 no admissible
state found, 4 verification failure.
"""

from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from .document import ResultDocument, grid_csv, report_to_dict
from .evaluate import (count_nodes, default_window, normalized_wavefunction, potential_spec,
                       potential_value)
from .quartic import (CLOSED_FAMILIES, NoClosedFormError, filter_states, quartic_family_solve,
                      search_quartic_constraint, solve_quartic_sector)
from .sextic import (DEFAULT_STARTS, SUPPORTED_FAMILIES, sextic_energy,
                     sextic_family_solve, solve_bethe)
from .states import DomainError, Parity, QesState, satisfies_constraint
from .verify import FdConfig, verify_state

log = logging.getLogger("qesosc")

EXIT_OK, EXIT_USAGE, EXIT_EMPTY, EXIT_VERIFY = 0, 2, 3, 4

# (n, parity, a, b) per curve; figures 3/4 use the c < 0 branch
FIGURES = {
    1: ("V", [(0, "even", a, -1.0) for a in (0.0, 1.0, -1.0)]),
    2: ("psi", [(0, "even", a, -1.0) for a in (0.0, 1.0, -1.0)]),
    3: ("V", [(1, "even", 1.0, -1.0), (1, "even", -1.0, -1.0)]),
    4: ("psi", [(1, "even", 1.0, -1.0), (1, "even", -1.0, -1.0)]),
}


class UsageError(Exception):
    pass


def _write(text: str, path: str | None) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _model(args, family, n, parity, **extra) -> dict:
    m = {"family": family, "n": n, "parity": parity.label if parity else None,
         "a": args.a, "b": args.b}
    m.update(extra)
    return m


def solve_states(family: str, n: int, parity: Parity, a=None, b=None, *, seed: int = 0,
                 starts: int = DEFAULT_STARTS, b_range=(-3.0, 3.0)):
    """Dispatch to the closed-form, matrix or search path. Returns (states, diagnostics)."""
    diagnostics: list[str] = []
    if n < 0:
        raise UsageError("n must be non-negative")
    if family == "quartic":
        closed = (n, parity) in CLOSED_FAMILIES
        if a is not None and b is not None:
            cands, diag = solve_quartic_sector(a, b, n)
            if diag["n_complex"]:
                diagnostics.append(f"{diag['n_complex']} complex eigenvalues discarded")
            for e in diag["degenerate"]:
                diagnostics.append(f"degenerate eigenvalue {e!r} returned once")
            return filter_states(cands, parity), diagnostics
        if closed:
            needs_b = (n, parity) == (1, Parity.EVEN)
            if needs_b and b is None:
                raise UsageError("the quartic (1, even) family needs --b")
            if not needs_b and a is None:
                raise UsageError(f"the quartic ({n}, {parity.label}) family needs --a")
            return quartic_family_solve(n, parity, a=a, b=b), diagnostics
        if a is None:
            raise UsageError("generic quartic search needs --a (b is searched)")
        diagnostics.append(f"b searched over [{b_range[0]!r}, {b_range[1]!r}]")
        return search_quartic_constraint(n, parity, a, b_range=b_range), diagnostics

    if (n, parity) not in SUPPORTED_FAMILIES:
        raise UsageError(f"no sextic family for n={n}, parity={parity.label}")
    if a is None or b is None:
        raise UsageError("sextic families need --a and --b")
    return sextic_family_solve(n, parity, a, b, starts=starts, seed=seed), diagnostics


def cmd_solve(args) -> int:
    parity = Parity.parse(args.parity)
    try:
        states, diagnostics = solve_states(args.family, args.n, parity, args.a, args.b,
                                           seed=args.seed, starts=args.starts,
                                           b_range=tuple(args.b_range))
    except (NoClosedFormError, DomainError, NotImplementedError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    doc = ResultDocument("solve", _model(args, args.family, args.n, parity,
                                         seed=args.seed, starts=args.starts),
                         states, None, diagnostics)
    _write(doc.to_json(), args.output)
    return EXIT_OK if states else EXIT_EMPTY


def _load(path: str) -> ResultDocument:
    try:
        return ResultDocument.from_json(_read(path))
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot parse {path}: {exc}") from exc


def cmd_verify(args) -> int:
    doc = _load(args.input)
    reports, ok = [], True
    for st in doc.states:
        if st.parity is None:
            raise UsageError("document contains a state without parity")
        cfg = FdConfig.for_family(st.family, length=args.length, points=args.points)
        rep = verify_state(st, cfg=cfg)
        ok &= rep.passed
        reports.append(report_to_dict(rep))
    doc.command = "verify"
    doc.verification = reports
    _write(doc.to_json(), args.output)
    return EXIT_OK if ok else EXIT_VERIFY


def _export_columns(states, labels, quantity, xs):
    cols = {}
    for st, label in zip(states, labels):
        if quantity in ("V", "both"):
            cols[f"V[{label}]"] = potential_value(xs, potential_spec(st))
        if quantity in ("psi", "both"):
            cols[f"psi[{label}]"] = normalized_wavefunction(xs, st)
    return cols


def figure_states(fig: int) -> list[QesState]:
    out = []
    for n, parity, a, b in FIGURES[fig][1]:
        states = sextic_family_solve(n, parity, a, b)
        if n == 1:
            states = [s for s in states if s.c < 0]
        out.append(states[0])
    return out


def cmd_export(args) -> int:
    if args.figure is not None:
        quantity, _ = FIGURES[args.figure]
        states = figure_states(args.figure)
        labels = [f"a={s.a:g},b={s.b:g},c={s.c:.6f}" for s in states]
    else:
        if args.input is None:
            raise UsageError("export needs an input document or --figure")
        doc = _load(args.input)
        idx = range(len(doc.states)) if args.state is None else [args.state]
        try:
            states = [doc.states[i] for i in idx]
        except IndexError:
            raise UsageError(f"document has no state {args.state}") from None
        if not states:
            raise UsageError("document contains no states")
        if any(s.parity is None for s in states):
            raise UsageError("cannot export a state without parity")
        quantity = "both"
        labels = [str(i) for i in idx]
    window = args.window or max(default_window(s) for s in states)
    xs = np.linspace(-window, window, args.samples)
    _write(grid_csv(xs, _export_columns(states, labels, quantity, xs)), args.output)
    return EXIT_OK


def cmd_bethe(args) -> int:
    sol = solve_bethe(args.n, args.a, args.b, args.c, starts=args.starts, seed=args.seed,
                      complex_roots=args.complex)
    states = []
    for roots in sol:
        coeffs = tuple(float(v) for v in roots.polynomial())
        parity = next((p for p in (Parity.EVEN, Parity.ODD)
                       if satisfies_constraint(coeffs, args.c, p)), None)
        st = QesState("sextic", args.n, sextic_energy(roots, args.a, args.b, args.c, args.n),
                      coeffs, a=args.a, b=args.b, c=args.c, parity=parity,
                      provenance="bethe", roots=roots.roots)
        if parity is not None:
            st = st.replace(node_count=count_nodes(st))
        states.append(st)
    diagnostics = [f"{sol.failed} of {sol.starts} starts did not converge", *sol.notes]
    doc = ResultDocument("bethe", {"family": "sextic", "n": args.n, "parity": None, "a": args.a,
                                   "b": args.b, "c": args.c, "seed": args.seed,
                                   "starts": args.starts}, states, None, diagnostics)
    _write(doc.to_json(), args.output)
    return EXIT_OK if states else EXIT_EMPTY


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qesosc", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve a QES family")
    s.add_argument("--family", choices=("quartic", "sextic"), required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--parity", choices=("even", "odd"), required=True)
    s.add_argument("--a", type=float)
    s.add_argument("--b", type=float)
    s.add_argument("--b-range", type=float, nargs=2, default=(-3.0, 3.0),
                   help="search interval for b (generic quartic path)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--starts", type=int, default=DEFAULT_STARTS)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="cross-check a document with the FD eigensolver")
    v.add_argument("input")
    v.add_argument("--length", type=float, help="half-line length L")
    v.add_argument("--points", type=int, default=4000)
    v.add_argument("-o", "--output")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("export", help="write x, V(x), psi(x) columns")
    e.add_argument("input", nargs="?")
    e.add_argument("--figure", type=int, choices=sorted(FIGURES))
    e.add_argument("--state", type=int)
    e.add_argument("--window", type=float)
    e.add_argument("--samples", type=int, default=801)
    e.add_argument("-o", "--output")
    e.set_defaults(func=cmd_export)

    b = sub.add_parser("bethe", help="raw multistart Bethe ansatz solve")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--a", type=float, required=True)
    b.add_argument("--b", type=float, required=True)
    b.add_argument("--c", type=float, required=True)
    b.add_argument("--starts", type=int, default=DEFAULT_STARTS)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--complex", action="store_true", help="allow complex-conjugate roots")
    b.add_argument("-o", "--output")
    b.set_defaults(func=cmd_bethe)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"qesosc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
