"""Command-line interface.

Exit codes: 0 on success, 1 on operational errors (I/O, parse failures,
schema mismatches, bad flags), 2 on semantic validation failures
(overlapping rules, invalid space documents, a proven law failing).
All output is deterministic given inputs and flags.
"""

import argparse
import json
import sys

from .conversion import (
    OverlappingRulesError,
    RuleSyntaxError,
    parse_ruleset,
    rules_to_space,
    tree_from_json,
    tree_to_space,
)
from .harness import STRATEGIES, StreamConfig, run_experiment
from .laws import report as law_report
from .laws import run_all as run_laws
from .model import (
    AttributeSchema,
    classify,
    space_from_json,
    space_to_json,
    validate,
)
from .operators import merge_streaming, op_barodot, op_plus, restrict
from .schemes import (
    MergeScheme,
    build_balanced,
    build_chain,
    build_factored,
    execute,
    impacts,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INVALID = 2


class CliError(Exception):
    def __init__(self, message, code=EXIT_ERROR):
        super().__init__(message)
        self.code = code


def _read_text(path):
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc


def _write_text(path, text):
    try:
        if path == "-":
            sys.stdout.write(text)
            return
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc}") from exc


def _read_json(path):
    try:
        return json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: invalid JSON: {exc}") from exc


def _read_space(path):
    try:
        return space_from_json(_read_json(path))
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"{path}: not a decision-space document: {exc}") from exc


def _write_space(path, space):
    _write_text(path, json.dumps(space_to_json(space), indent=2) + "\n")


def _read_schema(path):
    doc = _read_json(path)
    if isinstance(doc, dict):
        doc = doc.get("schema", doc)
    try:
        return AttributeSchema(
            tuple((a["name"], float(a["min"]), float(a["max"])) for a in doc)
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"{path}: not an attribute schema: {exc}") from exc


def _parse_scheme(text, num_models):
    for name, build in (("chain", build_chain), ("balanced", build_balanced)):
        if text == name or text.startswith(name + ":"):
            if text != name:
                try:
                    m = int(text[len(name) + 1:])
                except ValueError as exc:
                    raise CliError(f"bad scheme spec {text!r}") from exc
            elif num_models is not None:
                m = num_models
            else:
                raise CliError(f"scheme {name!r} needs a model count, e.g. {name}:6")
            if num_models is not None and m != num_models:
                raise CliError(f"scheme covers {m} models, got {num_models}")
            return build(m)
    if text.startswith("factored:"):
        try:
            factors = [int(k) for k in text[len("factored:"):].split("x")]
        except ValueError as exc:
            raise CliError(f"bad factored scheme spec {text!r}") from exc
        scheme = build_factored(factors)
        if num_models is not None and scheme.num_leaves != num_models:
            raise CliError(
                f"scheme covers {scheme.num_leaves} models, got {num_models}"
            )
        return scheme
    scheme = MergeScheme.from_json(_read_text(text))
    if num_models is not None and scheme.num_leaves != num_models:
        raise CliError(
            f"scheme covers {scheme.num_leaves} models, got {num_models}"
        )
    return scheme


def _impact_lines(scheme):
    return [f"{i}\t{w:.6f}" for i, w in enumerate(impacts(scheme))]


def cmd_convert(args):
    schema = _read_schema(args.schema)
    labels = tuple(args.classes.split(",")) if args.classes else None
    try:
        if args.rules is not None:
            space = rules_to_space(parse_ruleset(_read_text(args.rules)), schema, labels)
        else:
            tree, classes = tree_from_json(_read_json(args.tree))
            if labels is None and classes:
                labels = tuple(classes)
            space = tree_to_space(tree, schema, labels)
    except RuleSyntaxError as exc:
        raise CliError(str(exc))
    except OverlappingRulesError as exc:
        for v in exc.violations:
            print(v, file=sys.stderr)
        raise CliError("rules overlap; conversion refused", EXIT_INVALID)
    except ValueError as exc:
        raise CliError(str(exc))
    _write_space(args.out, space)
    return EXIT_OK


def cmd_merge(args):
    spaces = [_read_space(p) for p in args.inputs]
    try:
        if args.streaming_unbiased:
            acc = spaces[0]
            for sp in spaces[1:]:
                acc = merge_streaming(acc, sp)
            merged = acc
            lines = None
        else:
            scheme = _parse_scheme(args.scheme, len(spaces))
            merged = execute(scheme, spaces)
            lines = _impact_lines(scheme)
    except (ValueError, IndexError) as exc:
        raise CliError(str(exc))
    _write_space(args.out, merged)
    if lines:  # keep stdout clean when it carries the space itself
        stream = sys.stderr if args.out == "-" else sys.stdout
        print("\n".join(lines), file=stream)
    return EXIT_OK


def cmd_restrict(args):
    x, y = _read_space(args.inputs[0]), _read_space(args.inputs[1])
    try:
        _write_space(args.out, restrict(x, y))
    except ValueError as exc:
        raise CliError(str(exc))
    return EXIT_OK


def cmd_compose(args):
    x, y = _read_space(args.inputs[0]), _read_space(args.inputs[1])
    op = op_plus if args.op == "plus" else op_barodot
    try:
        _write_space(args.out, op(x, y))
    except ValueError as exc:
        raise CliError(str(exc))
    return EXIT_OK


def _parse_instance(text, dim):
    try:
        values = tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise CliError(f"bad instance {text!r}") from exc
    if len(values) != dim:
        raise CliError(f"instance {text!r} has {len(values)} values, need {dim}")
    return values


def cmd_classify(args):
    space = _read_space(args.space)
    dim = len(space.schema)
    if args.instance is not None:
        instances = [_parse_instance(args.instance, dim)]
    else:
        rows = [
            line for line in _read_text(args.instances).splitlines() if line.strip()
        ]
        instances = [_parse_instance(row, dim) for row in rows]
    for pt in instances:
        outcome = classify(space, pt)
        coords = ",".join(f"{v:g}" for v in pt)
        if outcome is None:
            print(f"{coords}\tuncovered")
        else:
            dist, label = outcome
            rendered = ", ".join(
                f"{l}={p:.6f}%" for l, p in zip(dist.labels, dist.as_percentages())
            )
            print(f"{coords}\t{label}\t{rendered}")
    return EXIT_OK


def cmd_impact(args):
    try:
        scheme = _parse_scheme(args.scheme, None)
    except ValueError as exc:
        raise CliError(str(exc))
    print("\n".join(_impact_lines(scheme)))
    return EXIT_OK


def cmd_validate(args):
    space = _read_space(args.input)
    violations = validate(space)
    for v in violations:
        print(v, file=sys.stderr)
    if violations:
        return EXIT_INVALID
    print("ok")
    return EXIT_OK


def cmd_laws(args):
    if args.trials < 1:
        raise CliError("--trials must be >= 1")
    results = run_laws(trials=args.trials, seed=args.seed)
    doc = law_report(results, args.seed, args.trials)
    for r in results:
        status = "pass" if r.passed else "FAIL"
        print(f"{status}\t{r.kind}\t{r.name}\t({r.trials} trials)", file=sys.stderr)
    print(json.dumps(doc, indent=2))
    return EXIT_OK if doc["proven_all_passed"] else EXIT_INVALID


def cmd_simulate(args):
    try:
        cfg = StreamConfig.from_json(_read_json(args.config))
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"bad experiment config: {exc}")
    try:
        result = run_experiment(cfg, args.strategy)
    except ValueError as exc:
        raise CliError(str(exc))
    _write_text(args.out, result.as_csv())
    stream = sys.stderr if args.out == "-" else sys.stdout
    print(json.dumps(result.summary(), indent=2), file=stream)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="decspace",
        description="Decision-space algebra: convert, merge, restrict, "
        "classify, and audit rectilinear classifier models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="rules or tree file to a space document")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--rules", help="rule DSL file ('-' for stdin)")
    src.add_argument("--tree", help="decision-tree JSON file")
    p.add_argument("--schema", required=True, help="attribute schema JSON")
    p.add_argument("--classes", help="comma-separated class label order")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("merge", help="combine space documents per a scheme")
    p.add_argument("--in", dest="inputs", nargs="+", required=True, metavar="FILE")
    p.add_argument(
        "--scheme", default="chain",
        help="chain | balanced | factored:K1xK2... | scheme JSON file",
    )
    p.add_argument(
        "--streaming-unbiased", action="store_true",
        help="left fold with mass-weighted (unbiased) accumulation",
    )
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_merge)

    p = sub.add_parser("restrict", help="restrict the first space by the second")
    p.add_argument("--in", dest="inputs", nargs=2, required=True, metavar="FILE")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_restrict)

    p = sub.add_parser("compose", help="composite operators over two spaces")
    p.add_argument("--op", choices=("plus", "barodot"), required=True)
    p.add_argument("--in", dest="inputs", nargs=2, required=True, metavar="FILE")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("classify", help="classify instances against a space")
    p.add_argument("--space", required=True)
    pts = p.add_mutually_exclusive_group(required=True)
    pts.add_argument("--instance", help="comma-separated coordinates")
    pts.add_argument("--instances", help="CSV of instances, one per line")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("impact", help="impact table of a merging scheme")
    p.add_argument("--scheme", required=True)
    p.set_defaults(func=cmd_impact)

    p = sub.add_parser("validate", help="check a space document's invariants")
    p.add_argument("--in", dest="input", required=True, metavar="FILE")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("laws", help="randomized algebraic-law report")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_laws)

    p = sub.add_parser("simulate", help="synthetic drift-stream experiment")
    p.add_argument("--config", required=True, help="experiment config JSON")
    p.add_argument("--strategy", choices=STRATEGIES, default="chain")
    p.add_argument("--out", default="-", help="accuracy CSV destination")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
