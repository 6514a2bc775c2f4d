import argparse
import json
import sys

from . import EXIT_CODES, Error, example_ids, run_example, run_suite, suite_names


def _window(text):
    lo, _, hi = text.partition(":")
    return int(lo), int(hi)


def _print(report):
    print(f"{report['id']}: {report['status']} ({report['truncation']})")
    for e in report["evidence"]:
        kind = "exact" if e["certified"] else "bounded"
        print(f"  [{'holds' if e['holds'] else 'fails'}, {kind}] {e['claim']}")
        if e["witness"]:
            print(f"      {e['witness']}")
    if report["kind"] == "suite":
        print(f"  {report['passed']}/{report['trials']} trials, seed {report['seed']}")
        if report["counterexample"]:
            print(f"  counterexample: {report['counterexample']}")
    for n in report["notes"]:
        print(f"  note: {n}")


def _emit(report, path):
    if path == "-":
        json.dump(report, sys.stdout, indent=2)
        print()
    elif path:
        with open(path, "w") as f:
            json.dump(report, f, indent=2)


def main(argv=None):
    parser = argparse.ArgumentParser(prog="dgdef")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a scripted example")
    v.add_argument("id", choices=example_ids())
    v.add_argument("--max-wordlen", type=int)
    v.add_argument("--window", type=_window, help="lo:hi")
    v.add_argument("--json")

    p = sub.add_parser("props", help="run a property suite")
    p.add_argument("--suite", required=True, choices=suite_names())
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json")

    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            report = run_example(args.id, args.max_wordlen, args.window)
        else:
            report = run_suite(args.suite, args.trials, args.seed)
    except Error as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    if args.json != "-":
        _print(report)
    _emit(report, args.json)
    return EXIT_CODES[report["status"]]


if __name__ == "__main__":
    sys.exit(main())
