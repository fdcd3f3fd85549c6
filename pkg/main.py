import argparse
import os
import sys
from typing import Callable, Dict, List, Optional

# Make the project root importable when run as a script.
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from env_utils import get_env_int
from src.common.duality import derived_tiling, derived_window, gale_dual
from src.common.errors import CodecError, SlkError
from src.common.friezes import (
    frieze_to_tiling, is_positive_quiddity, plucker_frieze_eval, quiddity_sequence,
)
from src.common.paths import join_paths, tilde
from src.common.pluecker import classify, cyclic_pluecker, pluecker
from src.common.positivity import enumerate_positive_friezes, positivity_equivalence_check
from src.common.reference_cases import run_all
from src.common.tilings import default_window, phi, psi, validate, validate_window, window
from src.utils import codec
from src.utils.log import get_logger, set_verbosity
from src.utils.render import render_frieze, render_grid, render_tiling

log = get_logger("cli")

EXIT_OK, EXIT_INVALID, EXIT_USAGE = 0, 1, 2


def emit(obj, indent: Optional[int] = 2) -> None:
    sys.stdout.write(codec.dumps(obj, indent=indent) + "\n")


def _doc(path: str):
    return codec.read_document(path)


# ---- commands ----
def cmd_phi(args) -> int:
    gamma, delta = codec.load_path(_doc(args.gamma)), codec.load_path(_doc(args.delta))
    t = phi(gamma, delta)
    out: Dict[str, object] = {"tiling": t}
    if args.window:
        i0, j0, rows, cols = args.window
        grid = window(t, i0, j0, rows, cols)
        out["window"] = codec.window_model(t.k, grid, i0, j0)
    emit(out)
    if args.render and args.window:
        print(render_grid(grid, i0, j0), file=sys.stderr)
    return EXIT_OK


def cmd_psi(args) -> int:
    gamma, delta = psi(codec.load_tiling(_doc(args.tiling)))
    emit({"gamma": gamma, "delta": delta})
    return EXIT_OK


def cmd_validate(args) -> int:
    if args.path:
        gamma = codec.load_path(_doc(args.path))
        emit({"k": gamma.k, "ok": True, "closure": gamma.closure.kind.value})
        return EXIT_OK
    if args.grid:
        k, grid, i0, j0 = codec.load_window(_doc(args.grid))
        report = validate_window(k, grid, i0, j0)
    else:
        t = (codec.load_tiling(_doc(args.tiling)) if args.tiling
             else frieze_to_tiling(codec.load_frieze(_doc(args.frieze))))
        report = validate(t, args.window)
    emit(report.as_dict())
    if not report.ok:
        for v in report.violations[:5]:
            print(f"[ERROR] {v}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


def cmd_dual(args) -> int:
    t = codec.load_tiling(_doc(args.tiling))
    p = args.p if args.p is not None else t.k - 1
    if p in (1, t.k - 1):
        emit(derived_tiling(t, p))
    else:
        size = args.size or default_window(t.k)
        emit({"p": p, "i0": 1, "j0": 1, "rows": derived_window(t, p, 1, 1, size, size)})
    return EXIT_OK


def cmd_gale(args) -> int:
    emit(gale_dual(codec.load_frieze(_doc(args.frieze))))
    return EXIT_OK


def cmd_quiddity(args) -> int:
    f = codec.load_frieze(_doc(args.frieze))
    q = quiddity_sequence(f)
    out: Dict[str, object] = {"quiddity": [list(v) for v in q], "positive": is_positive_quiddity(q)}
    if f.n is not None:
        out["equivalence"] = positivity_equivalence_check(f).as_dict()
    emit(out)
    return EXIT_OK


def cmd_entry(args) -> int:
    t = codec.load_tiling(_doc(args.tiling))
    emit({"i": args.i, "j": args.j, "value": t.entry(args.i, args.j)})
    return EXIT_OK


def cmd_join(args) -> int:
    gamma, delta = codec.load_path(_doc(args.gamma)), codec.load_path(_doc(args.delta))
    emit(join_paths(gamma, delta, args.m, args.n))
    return EXIT_OK


def cmd_enumerate(args) -> int:
    result = enumerate_positive_friezes(args.k, args.n, bound=args.bound, jobs=args.jobs,
                                        min_entry=args.min_entry, verify=not args.no_verify)
    for f in result.friezes:
        emit(f, indent=None)
    emit({"summary": result.summary()}, indent=None)
    return EXIT_OK


def cmd_selftest(args) -> int:
    results = run_all(args.case)
    for r in results:
        print(f"[{'PASS' if r.ok else 'FAIL'}] {r.name}: {r.detail}")
    failed = [r for r in results if not r.ok]
    print(f"{len(results) - len(failed)}/{len(results)} cases passed")
    return EXIT_INVALID if failed else EXIT_OK


def cmd_render(args) -> int:
    if args.frieze:
        print(render_frieze(codec.load_frieze(_doc(args.frieze)), periods=args.periods))
        return EXIT_OK
    t = codec.load_tiling(_doc(args.tiling))
    print(render_tiling(t, *(args.window or (1, 1, 3 * t.k, 3 * t.k))))
    return EXIT_OK


def cmd_pluecker(args) -> int:
    a = codec.load_matrix(_doc(args.matrix))
    value = cyclic_pluecker(a, args.index) if args.cyclic else pluecker(a, args.index)
    emit({"index": args.index, "value": value, "kind": classify(args.index, a.ncols, a.nrows).value})
    return EXIT_OK


def cmd_frieze(args) -> int:
    f = plucker_frieze_eval(codec.load_matrix(_doc(args.matrix)))
    if args.render:
        print(render_frieze(f))
    else:
        emit(f)
    return EXIT_OK


def cmd_tilde(args) -> int:
    emit(tilde(codec.load_path(_doc(args.path))))
    return EXIT_OK


# ---- parser ----
def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(description="Exact computations with SL_k-tilings, paths and friezes.")
    p.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG logging.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, fn: Callable, help_text: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(func=fn)
        return sp

    sp = add("phi", cmd_phi, "Tiling of a pair of paths.")
    sp.add_argument("--gamma", required=True, help="Path JSON for the rows.")
    sp.add_argument("--delta", required=True, help="Path JSON for the columns.")
    sp.add_argument("--window", type=int, nargs=4, metavar=("I0", "J0", "ROWS", "COLS"),
                    help="Also output the window with top-left entry m_{I0,J0}.")
    sp.add_argument("--render", action="store_true", help="Also print the window as a grid on stderr.")

    sp = add("psi", cmd_psi, "Canonical pair of paths of a tiling.")
    sp.add_argument("--tiling", required=True)

    sp = add("validate", cmd_validate, "Check tiling, path, frieze or dense window conditions.")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--tiling")
    src.add_argument("--path")
    src.add_argument("--frieze")
    src.add_argument("--grid", help="Window JSON {k, i0, j0, rows}.")
    sp.add_argument("--window", type=int, default=None,
                    help=f"Side of the checked window. Default: SLK_WINDOW_FACTOR*k "
                         f"(factor {get_env_int('SLK_WINDOW_FACTOR', 3)}).")

    sp = add("dual", cmd_dual, "Derived tiling of adjacent p x p minors (default p = k-1).")
    sp.add_argument("--tiling", required=True)
    sp.add_argument("--p", type=int, default=None,
                    help="Minor order.  Orders other than 1 and k-1 print a window of minors.")
    sp.add_argument("--size", type=int, default=None, help="Side of that window. Default: SLK_WINDOW_FACTOR*k.")

    sp = add("gale", cmd_gale, "Gale dual of a frieze of type (k,n).")
    sp.add_argument("--frieze", required=True)

    sp = add("quiddity", cmd_quiddity, "Quiddity sequence of a frieze.")
    sp.add_argument("--frieze", required=True)

    sp = add("entry", cmd_entry, "Single tiling entry m_{i,j}.")
    sp.add_argument("--tiling", required=True)
    sp.add_argument("--i", type=int, required=True)
    sp.add_argument("--j", type=int, required=True)

    sp = add("join", cmd_join, "Skew-periodic path through gamma_1..gamma_m and delta_1..delta_n.")
    sp.add_argument("--gamma", required=True)
    sp.add_argument("--delta", required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)

    sp = add("enumerate", cmd_enumerate, "Positive friezes of type (k,n), one JSON document per line.")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--bound", type=int, default=None, help="Largest quiddity entry for k >= 3. Default: SLK_ENUM_BOUND.")
    sp.add_argument("--min-entry", type=int, default=None, help="Smallest quiddity entry for k >= 3. Default: 0.")
    sp.add_argument("--jobs", type=int, default=None, help="Worker processes. Default: SLK_ENUM_JOBS.")
    sp.add_argument("--no-verify", action="store_true", help="Skip re-validating every frieze found.")

    sp = add("selftest", cmd_selftest, "Run the worked-example suite.")
    sp.add_argument("--case", action="append", default=None, help="Run only the named case (repeatable).")

    sp = add("render", cmd_render, "Text rendering of a tiling window or a frieze.")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--tiling")
    src.add_argument("--frieze")
    sp.add_argument("--window", type=int, nargs=4, metavar=("I0", "J0", "ROWS", "COLS"))
    sp.add_argument("--periods", type=int, default=2, help="Periods of a frieze of type (k,n) to show.")

    sp = add("pluecker", cmd_pluecker, "Pluecker coordinate of a k x n matrix.")
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--index", type=int, nargs="+", required=True)
    sp.add_argument("--cyclic", action="store_true", help="Read the index as a set of residues.")

    sp = add("frieze", cmd_frieze, "Pluecker frieze of a matrix with consecutive minors 1.")
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--render", action="store_true")

    sp = add("tilde", cmd_tilde, "Tilde of a path.")
    sp.add_argument("--path", required=True)
    return p


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    return build_parser().parse_args(argv)


def main(argv: Optional[List[str]] = None) -> int:
    args = parse_args(argv)
    set_verbosity(args.verbose)
    try:
        return args.func(args)
    except CodecError as exc:
        print(f"[ERROR] {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SlkError as exc:
        print(f"[ERROR] {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"[ERROR] {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
