"""Command-line interface: analyze, compare, and synth subcommands.

analyze ingests one knowledge graph (data triples plus optional ontology
triples), computes the metric report, and writes it as JSON, CSV, or
Markdown. compare runs several configurations and emits one table with a
column per graph. synth writes a deterministic synthetic fixture with its
ground-truth ledger.

Exit codes are stable: 0 success, 2 usage, 3 input I/O, 4 strict-mode
parse failure, 5 empty ontology, 6 invalid parameters or profile,
7 compare finished with failed columns, 1 unexpected error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import ontology, report as report_mod, synth
from .metrics import MetricReport, full_report
from .profiles import ProfileError, resolve_profile
from .store import ParseError, filter_by_label_language, parse_ntriples
from .synth import SynthParamError, SynthParams

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_PARSE = 4
EXIT_EMPTY_ONTOLOGY = 5
EXIT_PARAMS = 6
EXIT_PARTIAL = 7

_FORMATS = ("json", "csv", "markdown")


class CliError(Exception):
    def __init__(self, message: str, exit_code: int):
        super().__init__(message)
        self.exit_code = exit_code


@dataclass
class RunConfig:
    data: str
    ontology: str | None = None
    profile: str | None = None
    profile_file: str | None = None
    lang_filter: str | None = None
    strict: bool = False
    label: str | None = None

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise CliError(f"cannot read run file {path}: {exc}", EXIT_IO) from exc
        except json.JSONDecodeError as exc:
            raise CliError(f"run file {path} is not valid JSON: {exc}", EXIT_PARAMS) from exc
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(raw) - known
        if unknown:
            raise CliError(
                f"run file {path}: unknown keys {sorted(unknown)}", EXIT_PARAMS
            )
        if "data" not in raw:
            raise CliError(f"run file {path}: 'data' is required", EXIT_PARAMS)
        return cls(**raw)

    def validate(self) -> None:
        if (self.profile is None) == (self.profile_file is None):
            raise CliError(
                "exactly one of --profile / --profile-file must be given", EXIT_PARAMS
            )
        if not Path(self.data).is_file():
            raise CliError(f"input file not found: {self.data}", EXIT_IO)
        if self.ontology is not None and not Path(self.ontology).is_file():
            raise CliError(f"ontology file not found: {self.ontology}", EXIT_IO)


def run_analysis(config: RunConfig) -> MetricReport:
    """Ingest, extract, normalize, and compute the full metric report."""
    config.validate()
    try:
        profile = resolve_profile(config.profile, config.profile_file)
    except ProfileError as exc:
        raise CliError(str(exc), EXIT_PARAMS) from exc

    mode = "strict" if config.strict else "lenient"
    warnings: list[str] = []
    try:
        data_store = parse_ntriples(config.data, mode=mode)
    except ParseError as exc:
        raise CliError(f"{config.data}: {exc}", EXIT_PARSE) from exc
    except OSError as exc:
        raise CliError(f"cannot read {config.data}: {exc}", EXIT_IO) from exc

    if config.lang_filter:
        if not profile.label_predicate:
            raise CliError(
                f"profile {profile.name!r} has no label_predicate; cannot filter by language",
                EXIT_PARAMS,
            )
        filtered = filter_by_label_language(
            data_store, profile.label_predicate, config.lang_filter
        )
        if filtered.warning_unknown_predicate:
            warnings.append(
                f"label predicate {profile.label_predicate} not present in the data"
            )
        data_store = filtered.store

    try:
        if config.ontology is not None:
            try:
                ontology_store = parse_ntriples(config.ontology, mode=mode)
            except ParseError as exc:
                raise CliError(f"{config.ontology}: {exc}", EXIT_PARSE) from exc
            except OSError as exc:
                raise CliError(f"cannot read {config.ontology}: {exc}", EXIT_IO) from exc
            graph = ontology.load_ontology_triples(ontology_store, profile)
        else:
            graph = ontology.extract_ontology(data_store, profile)
    except ontology.EmptyOntologyError as exc:
        raise CliError(str(exc), EXIT_EMPTY_ONTOLOGY) from exc

    graph, _ = ontology.normalize(graph)
    label = config.label or Path(config.data).stem
    result = full_report(data_store, graph, profile, kg_label=label)
    result.errors.extend(warnings)
    if config.lang_filter:
        result.provenance["label_language_filter"] = config.lang_filter
    return result


def _write_output(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        try:
            Path(out).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise CliError(f"cannot write {out}: {exc}", EXIT_IO) from exc


def _stats_line(result: MetricReport) -> str:
    stats = result.stats
    return (
        f"{result.kg_label}: classes={stats['classes']} properties={stats['properties']} "
        f"triples={stats['triples']} instances={stats['instances']}"
    )


def cmd_analyze(args: argparse.Namespace) -> int:
    if args.config:
        config = RunConfig.from_file(args.config)
        if args.data:
            config.data = args.data
        if args.ontology:
            config.ontology = args.ontology
        if args.profile:
            config.profile, config.profile_file = args.profile, None
        if args.profile_file:
            config.profile_file, config.profile = args.profile_file, None
        if args.lang_filter:
            config.lang_filter = args.lang_filter
        if args.strict:
            config.strict = True
        if args.label:
            config.label = args.label
    else:
        if not args.data:
            raise CliError("--data is required (or use --config)", EXIT_USAGE)
        config = RunConfig(
            data=args.data,
            ontology=args.ontology,
            profile=args.profile,
            profile_file=args.profile_file,
            lang_filter=args.lang_filter,
            strict=args.strict,
            label=args.label,
        )

    result = run_analysis(config)
    timestamp = not args.no_timestamp
    if args.format == "json":
        text = report_mod.to_json(result, timestamp=timestamp)
    elif args.format == "csv":
        text = report_mod.to_csv([result])
    else:
        text = report_mod.to_markdown(result)
    _write_output(text, args.out)
    print(_stats_line(result), file=sys.stderr)
    for warning in result.errors:
        print(f"warning: {warning}", file=sys.stderr)
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    if len(args.runs) < 2:
        raise CliError("compare needs at least two run files", EXIT_USAGE)
    reports: list[MetricReport] = []
    failed: list[str] = []
    for run_path in args.runs:
        label = Path(run_path).stem
        try:
            config = RunConfig.from_file(run_path)
            if config.label is None:
                config.label = label
            reports.append(run_analysis(config))
        except CliError as exc:
            print(f"error: {run_path}: {exc}", file=sys.stderr)
            failed.append(label)

    timestamp = not args.no_timestamp
    if args.format == "json":
        text = report_mod.comparison_to_json(reports, timestamp=timestamp, failed=failed)
    elif args.format == "csv":
        text = report_mod.to_csv(reports)
    else:
        text = report_mod.comparison_to_markdown(reports, failed=failed)
    _write_output(text, args.out)
    for result in reports:
        print(_stats_line(result), file=sys.stderr)
    return EXIT_PARTIAL if failed else EXIT_OK


_FIXTURE_PROFILE_TEXT = """\
# Profile matching synthetic fixtures (plain RDFS predicates).
type_predicate = http://www.w3.org/1999/02/22-rdf-syntax-ns#type
subclass_predicate = http://www.w3.org/2000/01/rdf-schema#subClassOf
domain_predicate = http://www.w3.org/2000/01/rdf-schema#domain
label_predicate = http://www.w3.org/2000/01/rdf-schema#label
"""


def cmd_synth(args: argparse.Namespace) -> int:
    params = SynthParams(
        class_count=args.classes,
        max_depth=args.max_depth,
        multi_parent_probability=args.multi_parent,
        entity_count=args.entities,
        property_count=args.properties,
        property_per_class_mean=args.prop_mean,
        instantiation_skew=args.skew,
        zipf_s=args.zipf_s,
        planted_cycles=args.cycles,
        seed=args.seed,
        usage_triples_per_entity_mean=args.usage_mean,
    )
    try:
        params.validate()
    except SynthParamError as exc:
        raise CliError(str(exc), EXIT_PARAMS) from exc

    prefix = Path(args.out_prefix)
    triples_path = prefix.with_name(prefix.name + ".nt")
    ledger_path = prefix.with_name(prefix.name + ".ledger.json")
    profile_path = prefix.with_name(prefix.name + ".profile")
    try:
        triples_path.parent.mkdir(parents=True, exist_ok=True)
        ledger = synth.write_fixture(params, triples_path, ledger_path)
        profile_path.write_text(_FIXTURE_PROFILE_TEXT, encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot write fixture: {exc}", EXIT_IO) from exc

    totals = ledger.totals
    print(
        f"wrote {triples_path} ({totals['triples']} triples), {ledger_path}, {profile_path}"
    )
    print(
        f"classes={totals['classes']} properties={totals['properties']} "
        f"entities={totals['entities']} cycles={len(ledger.cycles)} seed={params.seed}"
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kgqual",
        description="Structural quality metrics for RDF knowledge graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="analyze one knowledge graph")
    analyze.add_argument("--data", help="N-Triples data file (gzip auto-detected)")
    analyze.add_argument("--ontology", help="standalone ontology N-Triples file")
    analyze.add_argument("--profile", help="bundled or user profile name")
    analyze.add_argument("--profile-file", help="path to a profile file")
    analyze.add_argument("--lang-filter", help="keep only subjects labeled in this language")
    analyze.add_argument("--format", choices=_FORMATS, default="json")
    analyze.add_argument("--out", help="output path (default: stdout)")
    analyze.add_argument("--strict", action="store_true", help="abort on malformed lines")
    analyze.add_argument("--no-timestamp", action="store_true",
                         help="omit the generated_at field for reproducible bytes")
    analyze.add_argument("--label", help="name for this graph in the report")
    analyze.add_argument("--config", help="run configuration JSON file")
    analyze.set_defaults(func=cmd_analyze)

    compare = sub.add_parser("compare", help="compare several knowledge graphs")
    compare.add_argument("runs", nargs="+", help="run configuration JSON files")
    compare.add_argument("--format", choices=_FORMATS, default="markdown")
    compare.add_argument("--out", help="output path (default: stdout)")
    compare.add_argument("--no-timestamp", action="store_true")
    compare.set_defaults(func=cmd_compare)

    synth_cmd = sub.add_parser("synth", help="generate a synthetic fixture")
    synth_cmd.add_argument("--classes", type=int, default=20)
    synth_cmd.add_argument("--max-depth", type=int, default=5)
    synth_cmd.add_argument("--multi-parent", type=float, default=0.0)
    synth_cmd.add_argument("--entities", type=int, default=100)
    synth_cmd.add_argument("--properties", type=int, default=10)
    synth_cmd.add_argument("--prop-mean", type=float, default=1.5)
    synth_cmd.add_argument("--skew", choices=("uniform", "zipf"), default="uniform")
    synth_cmd.add_argument("--zipf-s", type=float, default=1.5)
    synth_cmd.add_argument("--cycles", type=int, default=0)
    synth_cmd.add_argument("--usage-mean", type=float, default=2.0)
    synth_cmd.add_argument("--seed", type=int, default=0)
    synth_cmd.add_argument("--out-prefix", required=True,
                           help="output prefix for .nt, .ledger.json and .profile files")
    synth_cmd.set_defaults(func=cmd_synth)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except Exception as exc:  # pragma: no cover - last-resort diagnostics
        print(f"unexpected error: {exc}", file=sys.stderr)
        return EXIT_UNEXPECTED


if __name__ == "__main__":
    sys.exit(main())
