"""Command-line interface wiring the three passes.

Exit codes: 0 success (regardless of the credit verdict), 1 input error,
2 resource error, 3 internal error.  Every parameter can come from a JSON
config file via --config; explicit flags win.
"""

from __future__ import annotations

import json
import logging
import os
import sys
from pathlib import Path

import click

from . import reporting
from .assessment import (AssessmentConfig, agreement, assess_pair, load_annotations,
                         load_course, load_course_pairs, sweep)
from .bloom import load_seed_verbs
from .embeddings import (CachedFileProvider, CachingProvider, DeterministicProvider,
                         EmbeddingCache, RemoteProvider)
from .errors import (ComputationError, ConfigError, ContractError, LocreditError,
                     ParseFailure, ProviderError, ResourceError, TransportError,
                     VerbAssignmentError)
from .verbsim import (KNOWLEDGE_MEASURES, WordVectorTable, evaluate_measures,
                      load_verb_pairs, validate_measure)
from .wordnet import load_wordnet

PROVIDER_URL_ENV = "LOCREDIT_PROVIDER_URL"

logger = logging.getLogger(__name__)

_CONFIG_KEYS = ("wordnet_dir", "seed_verbs", "embedding_cache", "provider",
                "impact", "sim_threshold", "lo_threshold", "format")


def _load_config_file(path: str | None) -> dict:
    if not path:
        return {}
    file = Path(path)
    if not file.is_file():
        raise ResourceError(f"config file not found: {file}")
    try:
        data = json.loads(file.read_text(encoding="utf-8"))
    except ValueError as exc:
        raise ConfigError(f"config file {file} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config file {file} must hold a JSON object")
    unknown = sorted(set(data) - set(_CONFIG_KEYS))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    return data


def _merged(flag_value, config: dict, key: str, default=None):
    if flag_value is not None:
        return flag_value
    return config.get(key, default)


def _load_taxonomy(wordnet_dir):
    if not wordnet_dir:
        raise ConfigError("a WordNet directory is required "
                          "(--wordnet-dir or config wordnet_dir)")
    directory = Path(wordnet_dir)
    if not directory.is_dir():
        raise ResourceError(f"WordNet directory not found: {directory}")
    try:
        return load_wordnet(directory)
    except FileNotFoundError as exc:
        raise ResourceError(str(exc)) from exc


def build_provider(spec: str | None, cache_path: str | None):
    """Resolve a provider spec: test | cache | remote[:URL].

    $LOCREDIT_PROVIDER_URL overrides the remote endpoint.  Remote
    providers are always wrapped by a cache (in-memory when no cache file
    is configured).
    """
    spec = spec or "test"
    if spec == "test":
        provider = DeterministicProvider()
        if cache_path:
            provider = CachingProvider(provider, EmbeddingCache(cache_path))
        return provider
    if spec == "cache":
        if not cache_path:
            raise ConfigError("--provider cache requires --embedding-cache")
        path = Path(cache_path)
        if not path.is_file():
            raise ResourceError(f"embedding cache not found: {path}")
        return CachedFileProvider(EmbeddingCache(path))
    if spec == "remote" or spec.startswith("remote:"):
        url = os.environ.get(PROVIDER_URL_ENV) or spec.partition(":")[2]
        if not url:
            raise ConfigError(
                f"remote provider needs an endpoint: use remote:URL or set "
                f"${PROVIDER_URL_ENV}")
        cache = EmbeddingCache(cache_path) if cache_path else EmbeddingCache(None)
        return CachingProvider(RemoteProvider(url), cache)
    raise ConfigError(f"unknown provider {spec!r}; expected test, cache, "
                      f"or remote:URL")


def _assessment_config(impact, sim_threshold, lo_threshold, config: dict):
    try:
        return AssessmentConfig(
            impact=float(_merged(impact, config, "impact", 30.0)),
            sim_threshold=float(_merged(sim_threshold, config, "sim_threshold", 0.65)),
            lo_threshold=float(_merged(lo_threshold, config, "lo_threshold", 0.5)))
    except ContractError as exc:
        raise ConfigError(str(exc)) from exc


_shared_options = [
    click.option("--wordnet-dir", type=click.Path(), default=None,
                 help="Directory holding index.verb and data.verb."),
    click.option("--seed-verbs", type=click.Path(), default=None,
                 help="Seed-verb file; defaults to the bundled list."),
    click.option("--config", "config_path", type=click.Path(), default=None,
                 help="JSON config file; explicit flags win."),
    click.option("--format", "output_format",
                 type=click.Choice(["json", "table"]), default=None,
                 help="Report format on stdout (default table)."),
]

_provider_options = [
    click.option("--provider", default=None,
                 help="Embedding provider: test, cache, or remote:URL."),
    click.option("--embedding-cache", type=click.Path(), default=None,
                 help="Embedding cache file (required for --provider cache)."),
]

_threshold_options = [
    click.option("--impact", type=float, default=None,
                 help="Taxonomic share of the final score, 0..100."),
    click.option("--sim-threshold", type=float, default=None,
                 help="Minimum final similarity for two outcomes to match."),
    click.option("--lo-threshold", type=float, default=None,
                 help="Fraction of receiving outcomes that must match."),
]


def _apply(options):
    def wrap(fn):
        for option in reversed(options):
            fn = option(fn)
        return fn
    return wrap


@click.group()
def cli():
    """Transfer-credit decision support from learning-outcome similarity."""
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")


@cli.command()
@click.option("--receiving", "receiving_path", type=click.Path(), required=True,
              help="Receiving-course document (JSON).")
@click.option("--sending", "sending_path", type=click.Path(), required=True,
              help="Sending-course document (JSON).")
@_apply(_threshold_options)
@_apply(_provider_options)
@_apply(_shared_options)
@click.option("--out", "out_dir", type=click.Path(), default=None,
              help="Directory for report.json, grid CSVs, and the heatmap.")
def assess(receiving_path, sending_path, impact, sim_threshold, lo_threshold,
           provider, embedding_cache, wordnet_dir, seed_verbs, config_path,
           output_format, out_dir):
    """Decide transfer credit for one course pair."""
    config = _load_config_file(config_path)
    cfg = _assessment_config(impact, sim_threshold, lo_threshold, config)
    tax = _load_taxonomy(_merged(wordnet_dir, config, "wordnet_dir"))
    clusters = load_seed_verbs(_merged(seed_verbs, config, "seed_verbs"))
    clusters.unresolved_seeds(tax)
    prov = build_provider(_merged(provider, config, "provider"),
                          _merged(embedding_cache, config, "embedding_cache"))
    receiving = load_course(receiving_path, expected_role="receiving")
    sending = load_course(sending_path, expected_role="sending")

    result = assess_pair(receiving, sending, cfg, clusters, tax, prov)
    payload = reporting.result_to_dict(result)
    if _merged(output_format, config, "format", "table") == "json":
        click.echo(reporting.canonical_json(payload))
    else:
        click.echo(reporting.render_result_text(result))

    if out_dir:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(reporting.canonical_json(payload) + "\n",
                                         encoding="utf-8")
        for grid in (result.taxonomic, result.semantic, result.final):
            reporting.write_grid_csv(grid, out / f"{grid.kind}_grid.csv")
        from . import plots
        plots.save_grid_heatmap(result.final, out / "final_grid.png",
                                sim_threshold=cfg.sim_threshold,
                                title=f"{result.receiving_id} × {result.sending_id} "
                                      f"(decision: {result.decision.decision})")
        logger.info("report written to %s", out)


@cli.command("eval-verbs")
@click.option("--dataset", "dataset_path", type=click.Path(), required=True,
              help="Verb-pair TSV: verb1, verb2, POS, score, relation.")
@click.option("--measures", default=None,
              help=f"Comma-separated measures "
                   f"(default {','.join(KNOWLEDGE_MEASURES)}).")
@click.option("--vectors", "vector_specs", multiple=True,
              help="NAME=PATH word-vector table for vector:NAME measures.")
@_apply(_shared_options)
@click.option("--out", "out_dir", type=click.Path(), default=None,
              help="Directory for measures.csv and measures.png.")
def eval_verbs(dataset_path, measures, vector_specs, wordnet_dir, seed_verbs,
               config_path, output_format, out_dir):
    """Rank verb-similarity measures against a gold-scored verb-pair set."""
    config = _load_config_file(config_path)
    tax = _load_taxonomy(_merged(wordnet_dir, config, "wordnet_dir"))
    dataset_file = Path(dataset_path)
    if not dataset_file.is_file():
        raise ResourceError(f"dataset not found: {dataset_file}")
    dataset = load_verb_pairs(dataset_file)

    tables = {}
    for entry in vector_specs:
        name, _, path = entry.partition("=")
        if not name or not path:
            raise ConfigError(f"--vectors needs NAME=PATH, got {entry!r}")
        vector_file = Path(path)
        if not vector_file.is_file():
            raise ResourceError(f"vector file not found: {vector_file}")
        tables[name] = WordVectorTable.load(vector_file, name)

    wanted = ([m.strip() for m in measures.split(",") if m.strip()]
              if measures else list(KNOWLEDGE_MEASURES)
              + [f"vector:{name}" for name in tables])
    for measure in wanted:
        validate_measure(measure)

    report = evaluate_measures(tax, dataset, wanted, tables)
    if _merged(output_format, config, "format", "table") == "json":
        click.echo(reporting.canonical_json(reporting.measure_report_to_dict(report)))
    else:
        click.echo(reporting.render_measure_text(report))

    if out_dir:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        reporting.write_measures_csv(report, out / "measures.csv")
        from . import plots
        plots.save_measure_bars(report, out / "measures.png")


@cli.command("sweep")
@click.option("--pairs", "pairs_path", type=click.Path(), required=True,
              help="JSON list of {pair_id, receiving, sending}.")
@click.option("--param", type=click.Choice(["impact", "sim_threshold",
                                            "lo_threshold"]), required=True)
@click.option("--values", required=True,
              help="Comma-separated parameter values, in report order.")
@click.option("--annotations", "annotations_path", type=click.Path(), default=None,
              help="CSV of pair_id,yes|no for the agreement row.")
@_apply(_threshold_options)
@_apply(_provider_options)
@_apply(_shared_options)
@click.option("--out", "out_dir", type=click.Path(), default=None,
              help="Directory for sweep.csv and sweep.png.")
def sweep_cmd(pairs_path, param, values, annotations_path, impact, sim_threshold,
              lo_threshold, provider, embedding_cache, wordnet_dir, seed_verbs,
              config_path, output_format, out_dir):
    """Decide every pair across a range of one leniency parameter."""
    config = _load_config_file(config_path)
    base = _assessment_config(impact, sim_threshold, lo_threshold, config)
    tax = _load_taxonomy(_merged(wordnet_dir, config, "wordnet_dir"))
    clusters = load_seed_verbs(_merged(seed_verbs, config, "seed_verbs"))
    prov = build_provider(_merged(provider, config, "provider"),
                          _merged(embedding_cache, config, "embedding_cache"))
    pairs_file = Path(pairs_path)
    if not pairs_file.is_file():
        raise ResourceError(f"pairs file not found: {pairs_file}")
    pairs = load_course_pairs(pairs_file)
    try:
        parsed_values = [float(v) for v in values.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad sweep values {values!r}: {exc}") from exc
    if not parsed_values:
        raise ConfigError("empty sweep value range")
    annotations = None
    if annotations_path:
        annotations_file = Path(annotations_path)
        if not annotations_file.is_file():
            raise ResourceError(f"annotations file not found: {annotations_file}")
        annotations = load_annotations(annotations_file)

    try:
        result = sweep(pairs, base, param, parsed_values, clusters, tax, prov,
                       annotations)
    except ContractError as exc:
        raise ConfigError(str(exc)) from exc
    if _merged(output_format, config, "format", "table") == "json":
        click.echo(reporting.canonical_json(reporting.sweep_to_dict(result)))
    else:
        click.echo(reporting.render_sweep_text(result))

    if out_dir:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        reporting.write_sweep_csv(result, out / "sweep.csv")
        from . import plots
        plots.save_sweep_plot(result, out / "sweep.png")


@cli.group()
def cache():
    """Inspect or pre-build embedding caches."""


@cache.command("build")
@click.option("--course", "course_paths", type=click.Path(), multiple=True,
              help="Course document whose outcome texts get embedded.")
@click.option("--pairs", "pairs_path", type=click.Path(), default=None,
              help="Course-pair file whose outcome texts get embedded.")
@click.option("--provider", default="test",
              help="Provider to pull vectors from: test or remote:URL.")
@click.option("--embedding-cache", "cache_path", type=click.Path(), required=True)
def cache_build(course_paths, pairs_path, provider, cache_path):
    """Embed course outcomes once so later runs can use --provider cache."""
    if provider == "cache":
        raise ConfigError("cache build needs a source provider (test or remote:URL)")
    texts: list[str] = []
    for path in course_paths:
        course = load_course(path)
        texts.extend(lo.text for lo in course.outcomes)
    if pairs_path:
        for pair in load_course_pairs(pairs_path):
            texts.extend(lo.text for lo in pair.receiving.outcomes)
            texts.extend(lo.text for lo in pair.sending.outcomes)
    if not texts:
        raise ConfigError("nothing to embed: pass --course and/or --pairs")
    prov = build_provider(provider, cache_path)
    prov.embed_batch(texts)
    store = EmbeddingCache(cache_path)
    click.echo(f"cache {cache_path}: provider={store.provider_name} "
               f"dim={store.dimension} entries={len(store)}")


@cache.command("info")
@click.option("--embedding-cache", "cache_path", type=click.Path(), required=True)
def cache_info(cache_path):
    """Show provider, dimension, and entry count of a cache file."""
    path = Path(cache_path)
    if not path.is_file():
        raise ResourceError(f"embedding cache not found: {path}")
    store = EmbeddingCache(path)
    click.echo(f"provider: {store.provider_name}")
    click.echo(f"dimension: {store.dimension}")
    click.echo(f"entries: {len(store)}")


@cli.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
@_apply(_provider_options)
@_apply(_shared_options)
@click.option("--ui", "ui_dir", type=click.Path(), default=None,
              help="Static directory with the bundled what-if console.")
@click.option("--allow-origin", "allow_origins", multiple=True,
              help="CORS origins (default: *).")
def serve(host, port, provider, embedding_cache, wordnet_dir, seed_verbs,
          config_path, output_format, ui_dir, allow_origins):
    """Launch the JSON-over-HTTP assessment service."""
    import uvicorn

    from .service import ServiceRuntime, create_app

    config = _load_config_file(config_path)
    tax = _load_taxonomy(_merged(wordnet_dir, config, "wordnet_dir"))
    clusters = load_seed_verbs(_merged(seed_verbs, config, "seed_verbs"))
    clusters.unresolved_seeds(tax)
    prov = build_provider(_merged(provider, config, "provider"),
                          _merged(embedding_cache, config, "embedding_cache"))
    app = create_app(ServiceRuntime(tax, clusters, prov),
                     allow_origins=list(allow_origins) or ["*"],
                     ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port)


def main(argv: list[str] | None = None) -> None:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.ClickException as exc:
        exc.show(file=sys.stderr)
        sys.exit(1)
    except click.Abort:
        click.echo("aborted", err=True)
        sys.exit(1)
    except (ResourceError, TransportError) as exc:
        _fail(exc, 2)
    except FileNotFoundError as exc:
        _fail(exc, 2)
    except (ConfigError, ParseFailure, ContractError, ComputationError,
            VerbAssignmentError, ProviderError) as exc:
        _fail(exc, 1)
    except LocreditError as exc:
        _fail(exc, 3)
    except Exception as exc:  # pragma: no cover - last-resort guard
        _fail(exc, 3)
    sys.exit(0)


def _fail(exc: BaseException, code: int) -> None:
    stage = getattr(exc, "stage", None)
    prefix = f"[{stage} pass] " if stage else ""
    click.echo(f"error: {prefix}{exc}", err=True)
    sys.exit(code)


if __name__ == "__main__":
    main()
