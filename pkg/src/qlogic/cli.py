"""Command-line interface: ``qlogic build|states|verify|export-dot``.

``--structure`` takes a built-in name (``qubit-msigma``, ``qubit-blocks``) or
the path of a structure document. Output goes to ``--output`` or stdout.

Exit codes: 0 success, 2 usage error, 3 SchemaError, 4 ValidationError,
5 CheckFailed, 1 any other library error.
"""

import argparse
import os
import sys

from . import catalog, formats
from .errors import CheckFailed, QLogicError, SchemaError, UnknownElement, ValidationError
from .lattice import PartialLogic, partial_logic, paste_blocks
from .states import (
    classification_consistent_states,
    classify_event,
    dispersion_free_search,
    indifference_state,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_SCHEMA = 3
EXIT_VALIDATION = 4
EXIT_CHECK = 5


def load(source, mode=None):
    """Structure from a built-in name or a document path, optionally switched to ``mode``."""
    if source in catalog.BUILTINS:
        s = catalog.BUILTINS[source]()
        if mode and mode != formats.mode_of(s):
            build = paste_blocks if mode == "pasted" else partial_logic
            s = build(s.blocks, name=s.name)
        return s
    if not os.path.exists(source):
        raise SchemaError(f"{source!r} is neither a built-in structure {sorted(catalog.BUILTINS)} nor a file")
    return formats.load_structure(source, mode=mode)


def _element(s, key):
    if key is None:
        return None
    try:
        return s.check_id(int(key))
    except (ValueError, UnknownElement):
        return s.index(key)


def _report(s, states=(), classification=None, checks=(), **extra):
    doc = {
        "structure": formats.structure_summary(s),
        "states": [formats.state_to_json(st) for st in states],
        "classification": classification or {},
        "checks": list(checks),
    }
    doc.update(extra)
    return doc


def cmd_build(source, mode=None):
    return formats.structure_document(load(source, mode))


def cmd_states(source, mode=None, preparation=None):
    """Dispersion-free states (pasted) or indifference states per preparation (partial)."""
    s = load(source, mode)
    if not isinstance(s, PartialLogic):
        res = dispersion_free_search(s)
        meta = {"structure": res.structure, "atom_count": res.atom_count, "nodes": res.nodes,
                "backend": res.backend, "count": len(res.states)}
        return _report(s, res.states, metadata=meta)
    preps = s.atoms() if preparation is None else [_element(s, preparation)]
    states, table, empty = [], {}, {}
    for p in preps:
        states.append(indifference_state(s, p))
        table[str(p)] = {str(t): str(classify_event(s, p, t)) for t in range(len(s))}
        empty[str(p)] = len(classification_consistent_states(s, p, grid=(0, 1)))
    meta = {
        "structure": s.name,
        "atom_count": len(s.atoms()),
        "dispersion_free_consistent": empty,
        "dispersion_free_consistent_empty": all(v == 0 for v in empty.values()),
    }
    return _report(s, states, table, metadata=meta)


def cmd_verify(source, mode=None, rho_path=None):
    """Run the invariant battery; raises CheckFailed (carrying the report) on any failed check."""
    from .checks import run_checks

    s = load(source, mode)
    rho = formats.load_density(rho_path) if rho_path else None
    checks, extras = run_checks(s, rho)
    states = []
    extra = {}
    if "dispersion_free" in extras:
        states = extras["dispersion_free"].states
    if "indifference" in extras:
        states = extras["indifference"]
        extra["born_agreement"] = extras["born_agreement"]
    if "born_column" in extras:
        extra["born_column"] = {str(k): v for k, v in extras["born_column"].items()}
    report = _report(s, states, checks=checks, **extra)
    report["passed"] = all(c["passed"] for c in checks)
    failed = [c["name"] for c in checks if not c["passed"]]
    if failed:
        err = CheckFailed(f"failed checks: {', '.join(failed)}")
        err.report = report
        raise err
    return report


def cmd_export_dot(source, mode=None):
    return formats.dot_document(load(source, mode))


def _parser():
    p = argparse.ArgumentParser(prog="qlogic", description="Finite-dimensional quantum logic toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt_default):
        sp.add_argument("--structure", required=True, help="built-in name or structure document path")
        sp.add_argument("--mode", choices=formats.MODES, help="override pasted/partial")
        sp.add_argument("--output", help="write here instead of stdout")
        sp.add_argument("--format", choices=("json", "dot"), default=fmt_default)

    common(sub.add_parser("build", help="write a canonical structure document"), "json")
    sp = sub.add_parser("states", help="enumerate states")
    common(sp, "json")
    sp.add_argument("--preparation", help="element id or label of the prepared atom (partial mode)")
    sp = sub.add_parser("verify", help="run the invariant battery")
    common(sp, "json")
    sp.add_argument("--rho", help="density matrix JSON file")
    common(sub.add_parser("export-dot", help="Hasse diagram in DOT"), "dot")
    return p


def _emit(text, output):
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        if args.command in ("build", "export-dot"):
            if args.format == "dot":
                text = cmd_export_dot(args.structure, args.mode)
            else:
                text = formats.dumps(cmd_build(args.structure, args.mode))
        elif args.format == "dot":
            raise SchemaError(f"{args.command} only writes json")
        elif args.command == "states":
            text = formats.dumps(cmd_states(args.structure, args.mode, args.preparation))
        else:
            text = formats.dumps(cmd_verify(args.structure, args.mode, args.rho))
    except CheckFailed as exc:
        _emit(formats.dumps(exc.report), args.output)
        print(f"qlogic: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except SchemaError as exc:
        print(f"qlogic: schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except ValidationError as exc:
        print(f"qlogic: validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except QLogicError as exc:
        print(f"qlogic: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    _emit(text, args.output)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
