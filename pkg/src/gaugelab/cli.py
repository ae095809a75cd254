"""Command line entry point: ``gaugelab list | run | report | serve``.

``run`` executes in-process by default; with ``--server URL`` it becomes a
thin client of the HTTP service in :mod:`gaugelab.api` and writes the same
output files from the response.
"""

from __future__ import annotations

import argparse
import json
import pathlib
import sys

import jsonschema

EXIT_FAIL = 1
EXIT_ERROR = 2


def _schema() -> dict:
    return json.loads((pathlib.Path(__file__).with_name("data") / "report.schema.json").read_text())


def _remote_list(server: str) -> list:
    import httpx

    resp = httpx.get(f"{server.rstrip('/')}/scenarios", timeout=30.0)
    resp.raise_for_status()
    return resp.json()


def cmd_list(args) -> int:
    if args.server:
        entries = _remote_list(args.server)
    else:
        from .scenarios import list_scenarios

        entries = list_scenarios()
    for entry in entries:
        print(f"{entry['name']:28s} {entry['description']}")
        if args.verbose:
            for claim in entry["claims"]:
                print(f"    - {claim['id']}: {claim['relation']}")
    return 0


def _run_remote(args, params) -> dict:
    import httpx

    from .spectra import Method, Spectrum, write_spectrum_csv

    if args.dump_fields:
        raise SystemExit("--dump-fields needs the fields in memory; run without --server")
    resp = httpx.post(f"{args.server.rstrip('/')}/scenarios/{args.scenario}/run",
                      json={"params": params, "seed": args.seed}, timeout=None)
    if resp.status_code != 200:
        raise SystemExit(f"server error {resp.status_code}: {resp.json().get('detail', resp.text)}")
    body = resp.json()
    spectra = body.pop("spectra")
    wall = body.pop("wall_time_s")
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(json.dumps(body, indent=2, sort_keys=True, allow_nan=False) + "\n")
    (out / "timing.json").write_text(json.dumps({"wall_time_s": round(wall, 3)}) + "\n")
    for key, rows in spectra.items():
        values = [r[0] for r in rows]
        residuals = [r[1] for r in rows]
        write_spectrum_csv(Spectrum(values, residuals, Method.ITERATIVE_LOW_K), out / f"spectrum_{key}.csv")
    return body


def cmd_run(args) -> int:
    from .config import load_config
    from .errors import GaugeLabError
    from .scenarios import run, summarize, write_outputs

    params = load_config(args.config) if args.config else {}
    if args.server:
        report = _run_remote(args, params)
    else:
        try:
            result = run(args.scenario, params, args.seed)
        except GaugeLabError as exc:
            print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
            return EXIT_ERROR
        write_outputs(result, args.out, dump_fields=args.dump_fields)
        report = result.report.to_dict()
    print(summarize(report))
    print(f"report written to {pathlib.Path(args.out) / 'report.json'}")
    return 0 if report["passed"] else EXIT_FAIL


def _collect_reports(root: pathlib.Path) -> list:
    if (root / "report.json").is_file():
        return [root / "report.json"]
    return sorted(root.glob("*/report.json"))


def cmd_report(args) -> int:
    from .scenarios import summarize

    root = pathlib.Path(args.dir)
    paths = _collect_reports(root)
    if not paths:
        print(f"error: no report.json under {root}", file=sys.stderr)
        return EXIT_ERROR
    schema = _schema()
    ok = True
    for path in paths:
        report = json.loads(path.read_text())
        try:
            jsonschema.validate(report, schema)
        except jsonschema.ValidationError as exc:
            print(f"{path}: schema violation: {exc.message}", file=sys.stderr)
            ok = False
            continue
        # recompute rather than trust the stored flag
        passed = all(c["passed"] for c in report["claims"])
        ok = ok and passed and report["passed"] == passed
        print(summarize(report))
    print(f"{len(paths)} report(s): {'ALL PASS' if ok else 'FAILURES'}")
    return 0 if ok else EXIT_FAIL


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("gaugelab.api:app", host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gaugelab", description="Numerical checks of gauge (non)invariance.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list", help="list scenarios and their claims")
    p.add_argument("-v", "--verbose", action="store_true", help="also print every claim")
    p.add_argument("--server", help="query a running gaugelab service instead")
    p.set_defaults(func=cmd_list)

    p = sub.add_parser("run", help="run one scenario and write its report")
    p.add_argument("scenario")
    p.add_argument("--config", help="key = value parameter file")
    p.add_argument("--out", default="out", help="output directory (default: ./out)")
    p.add_argument("--seed", type=int, default=None, help="seed for randomised gauge functions")
    p.add_argument("--dump-fields", action="store_true", help="also write decomposed fields where available")
    p.add_argument("--server", help="run on a gaugelab service at this URL")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("report", help="validate and summarise reports in a directory")
    p.add_argument("dir")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # surfaced as a clean message with a distinct exit code
        from .errors import GaugeLabError

        if isinstance(exc, (GaugeLabError, OSError)) or type(exc).__module__.startswith("httpx"):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_ERROR
        raise


if __name__ == "__main__":
    sys.exit(main())
