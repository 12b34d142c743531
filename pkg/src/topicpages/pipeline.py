"""File-artifact stages and end-to-end orchestration.

Each stage reads upstream artifacts from a run directory and writes its own,
so any stage can be re-run in isolation.  A full run finishes by writing
manifest.json, the content-hash inventory of every artifact it produced;
two runs over the same inputs and seed produce byte-identical bundles.
"""

from __future__ import annotations

import hashlib
import json
import shutil
from pathlib import Path
from typing import Callable, Iterable, Sequence

from . import classify as classify_mod
from . import cluster as cluster_mod
from . import content as content_mod
from . import tracking as tracking_mod
from .config import PipelineConfig, parse_range
from .dictionary import TopicalDictionary, bundled_dictionary, load_dictionary_file
from .embeddings import load_embeddings_file
from .errors import MissingStage, PipelineError
from .fetch import fetch_missing, load_snapshot_index, read_snapshot
from .stopwords import DEFAULT_STOPWORDS, load_stopwords
from .thresholds import (
    DEFAULT_BUCKET_SIZES,
    Thresholds,
    build_histogram,
    filter_subpages,
    fit_thresholds,
    write_histogram_csv,
)
from .urls import (
    PageUrl,
    extract_links,
    load_suffixes,
    normalize,
    read_url_file,
    url_metrics,
    write_url_file,
)

MANIFEST_NAME = "manifest.json"


def read_homepage_list(path: str | Path) -> list[PageUrl]:
    """One homepage URL per line; blank lines and # comments are skipped."""
    out = []
    for line in Path(path).read_text("utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(normalize(line))
    return out


def _json_dump(obj, path: Path) -> None:
    path.write_text(json.dumps(obj, ensure_ascii=False, sort_keys=True, indent=2) + "\n", "utf-8")


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


class Runner:
    """Shared state for one pipeline run rooted at config.out_dir."""

    def __init__(self, config: PipelineConfig) -> None:
        self.config = config
        self.out_dir = Path(config.out_dir)
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.artifacts: dict[str, Path] = {}
        self._dictionary: TopicalDictionary | None = None

    # --- shared resources --------------------------------------------------

    @property
    def snapshot_dir(self) -> Path:
        return Path(self.config.snapshots) if self.config.snapshots else self.out_dir / "snapshots"

    def dictionary(self) -> TopicalDictionary:
        if self._dictionary is None:
            if self.config.dictionary:
                self._dictionary = load_dictionary_file(self.config.dictionary)
            else:
                self._dictionary = bundled_dictionary()
        return self._dictionary

    def embeddings(self):
        if not self.config.embeddings:
            raise MissingStage("no embeddings file configured")
        return load_embeddings_file(self.config.embeddings)

    def stopword_set(self) -> frozenset[str]:
        return load_stopwords(self.config.stopwords) if self.config.stopwords else DEFAULT_STOPWORDS

    def suffix_set(self):
        return load_suffixes(self.config.suffixes) if self.config.suffixes else None

    def homepages(self) -> list[PageUrl]:
        if not self.config.urls:
            raise MissingStage("no homepage list configured")
        return read_homepage_list(self.config.urls)

    def _register(self, name: str, path: Path) -> Path:
        self.artifacts[name] = path
        return path

    def _require(self, name: str, filename: str) -> Path:
        path = self.out_dir / filename
        if not path.exists():
            raise MissingStage(f"{filename} is missing; run the {name} stage first")
        return path

    def thresholds(self) -> Thresholds:
        path = self._require("fit-thresholds", "thresholds.json")
        return Thresholds.from_dict(json.loads(path.read_text("utf-8")))

    # --- stages -------------------------------------------------------------

    def stage_fetch(self, urls: Sequence[PageUrl] | None = None) -> dict:
        """Make the snapshot store cover the homepage list (or given URLs)."""
        cfg = self.config
        targets = list(urls) if urls is not None else self.homepages()
        fetched, reused = fetch_missing(
            targets,
            self.snapshot_dir,
            live=cfg.live,
            parallelism=cfg.parallel,
            timeout=cfg.timeout,
            retries=cfg.retries,
            **({"user_agent": cfg.user_agent} if cfg.user_agent else {}),
            respect_robots=cfg.respect_robots,
        )
        self._register("snapshot-index", self.snapshot_dir / "index.jsonl")
        return {"fetched": fetched, "reused": reused}

    def stage_extract(self) -> dict:
        """Partition every homepage's links into internal / external files."""
        suffixes = self.suffix_set()
        index = load_snapshot_index(self.snapshot_dir)
        internal: list[tuple[PageUrl, str]] = []
        external: list[tuple[PageUrl, str]] = []
        skipped = 0
        missing: list[str] = []
        for homepage in self.homepages():
            row = index.get(homepage.normalized)
            if row is None or not row.get("path"):
                missing.append(homepage.normalized)
                continue
            partition = extract_links(read_snapshot(self.snapshot_dir, row), homepage, suffixes)
            internal.extend((u, homepage.domain) for u in partition.internal)
            external.extend((u, homepage.domain) for u in partition.external)
            skipped += partition.skipped
        write_url_file(self._register("internal", self.out_dir / "internal.jsonl"), internal)
        write_url_file(self._register("external", self.out_dir / "external.jsonl"), external)
        return {
            "internal": len(internal),
            "external": len(external),
            "skipped_hrefs": skipped,
            "missing_snapshots": missing,
        }

    def stage_fit_thresholds(self, urls_path: str | Path | None = None) -> dict:
        cfg = self.config
        source = Path(urls_path) if urls_path else self._require("extract", "internal.jsonl")
        train = [u for u, _ in read_url_file(source)]
        fitted = fit_thresholds(
            train,
            DEFAULT_BUCKET_SIZES,
            cosine_cutoff=cfg.cosine_cutoff,
            fallback_defaults=cfg.fallback_defaults,
        )
        _json_dump(fitted.to_dict(), self._register("thresholds", self.out_dir / "thresholds.json"))
        hist_dir = self.out_dir / "histograms"
        hist_dir.mkdir(exist_ok=True)
        metrics = [url_metrics(u) for u in train]
        series = {
            "url_length": ([m.url_length for m in metrics], DEFAULT_BUCKET_SIZES[0]),
            "subpath_length": ([m.max_subpath_length for m in metrics], DEFAULT_BUCKET_SIZES[1]),
            "hyphens": ([m.max_hyphens for m in metrics], DEFAULT_BUCKET_SIZES[2]),
        }
        for name, (values, bucket) in series.items():
            path = hist_dir / f"{name}.csv"
            write_histogram_csv(build_histogram(values, bucket), path)
            self._register(f"histogram-{name}", path)
        return fitted.to_dict()

    def stage_filter(self, urls_path: str | Path | None = None) -> dict:
        source = Path(urls_path) if urls_path else self._require("extract", "internal.jsonl")
        rows = read_url_file(source)
        thresholds = self.thresholds()
        kept_urls = set(
            u.normalized for u in filter_subpages([u for u, _ in rows], thresholds)
        )
        kept = [(u, site) for u, site in rows if u.normalized in kept_urls]
        write_url_file(self._register("filtered", self.out_dir / "filtered.jsonl"), kept)
        return {"kept": len(kept), "dropped": len(rows) - len(kept)}

    def stage_classify(self, urls_path: str | Path | None = None) -> dict:
        source = Path(urls_path) if urls_path else self._require("filter", "filtered.jsonl")
        rows = read_url_file(source)
        classifier = classify_mod.TopicClassifier(
            self.dictionary(),
            self.embeddings(),
            cutoff=self.thresholds().cosine_cutoff,
            stopwords=self.stopword_set(),
        )
        assignments = [
            classifier.classify(u) for u, _ in rows if u.subpaths
        ]
        classify_mod.write_assignments(
            self._register("assignments", self.out_dir / "assignments.jsonl"), assignments
        )
        methods = {"exact": 0, "embedding": 0, "other": 0}
        for a in assignments:
            methods[a.method] += 1
        return {"classified": len(assignments), **methods}

    def stage_best_subpages(self, assignments_path: str | Path | None = None) -> dict:
        source = (
            Path(assignments_path)
            if assignments_path
            else self._require("classify", "assignments.jsonl")
        )
        dictionary = self.dictionary()
        classifier = classify_mod.TopicClassifier(
            dictionary,
            self.embeddings(),
            cutoff=self.thresholds().cosine_cutoff if (self.out_dir / "thresholds.json").exists() else 0.4,
            stopwords=self.stopword_set(),
        )
        assignments = classify_mod.read_assignments(source, dictionary)
        grouped: dict[tuple[str, str], list] = {}
        for a in assignments:
            if a.topic.is_other:
                continue
            grouped.setdefault((a.url.domain, a.topic.name), []).append(a)
        by_site: dict[str, dict] = {}
        for (site, topic_name), group in sorted(grouped.items()):
            url = classifier.select_best_subpage(group)
            by_site.setdefault(site, {})[dictionary.topic_named(topic_name)] = url
        results = [
            classify_mod.BestSubpages(site=site, selections=selections)
            for site, selections in sorted(by_site.items())
        ]
        classify_mod.write_best_subpages(
            self._register("best", self.out_dir / "best.jsonl"), results
        )
        return {"sites": len(results), "selections": sum(len(r.selections) for r in results)}

    def stage_track(self) -> dict:
        cfg = self.config
        if not cfg.crawl_logs:
            raise MissingStage("no crawl_logs configured")
        if not cfg.disconnect:
            raise MissingStage("no disconnect list configured")
        best_rows = classify_mod.read_best_subpages(self._require("best-subpages", "best.jsonl"))
        topic_names = {t.name for t in self.dictionary().topics()}
        topic_names.update(row["topic"] for row in best_rows)
        records = tracking_mod.read_crawl_log(cfg.crawl_logs, topics=topic_names)
        dl = tracking_mod.load_disconnect_file(cfg.disconnect)

        matrix_topics = {row["topic"] for row in best_rows}
        matrix_topics.add(tracking_mod.HOMEPAGE_TOPIC)
        matrix = tracking_mod.build_tracking_matrix(records, topics=matrix_topics)
        _json_dump(
            matrix.to_dict(),
            self._register("tracking-matrix", self.out_dir / "tracking-matrix.json"),
        )

        breakdown = tracking_mod.category_breakdown(records, dl)
        top_sites = cfg.top_sites_set()
        report = {
            "cookie_stats": {
                t: s.to_dict() for t, s in tracking_mod.cookie_stats_by_topic(records).items()
            },
            "category_breakdown": {
                "all": breakdown,
                "top_sites": (
                    tracking_mod.category_breakdown(records, dl, sites=top_sites)
                    if top_sites
                    else None
                ),
            },
            "percent_diff_vs_homepage": (
                tracking_mod.percent_diff_vs_homepage(breakdown)
                if tracking_mod.HOMEPAGE_TOPIC in breakdown
                else None
            ),
            "top_tp_coverage": [
                {"third_party": tp, "coverage": cov}
                for tp, cov in tracking_mod.top_tp_coverage(records, cfg.top_tp)
            ],
            "preferential_attachment": [
                {"third_party": tp, "topic": topic}
                for tp, topic in tracking_mod.preferential_attachment(matrix)
            ],
            "records": len(records),
        }
        _json_dump(
            report, self._register("tracking-report", self.out_dir / "tracking-report.json")
        )
        return {"records": len(records), "third_parties": len(matrix.third_parties)}

    def stage_content(self) -> dict:
        """Build per-topic documents from snapshots and weigh their terms."""
        best_rows = classify_mod.read_best_subpages(self._require("best-subpages", "best.jsonl"))
        index = load_snapshot_index(self.snapshot_dir)
        stopword_set = self.stopword_set()

        pages: list[tuple[str, str]] = []  # (topic, url) in deterministic order
        for row in sorted(best_rows, key=lambda r: (r["topic"], r["url"])):
            pages.append((row["topic"], row["url"]))
        try:
            homepage_urls = [u.normalized for u in self.homepages()]
        except MissingStage:
            homepage_urls = []
        pages.extend((tracking_mod.HOMEPAGE_TOPIC, u) for u in sorted(homepage_urls))

        texts: dict[str, list[str]] = {}
        languages: list[dict] = []
        missing: list[str] = []
        for topic, url in pages:
            row = index.get(url)
            if row is None or not row.get("path"):
                missing.append(url)
                continue
            text = content_mod.extract_text(read_snapshot(self.snapshot_dir, row))
            verdict = content_mod.detect_english(text, stopword_set)
            languages.append(
                {
                    "url": url,
                    "topic": topic,
                    "is_english": verdict.is_english,
                    "confident": verdict.confident,
                }
            )
            texts.setdefault(topic, []).append(text)

        docs = [
            content_mod.TopicDocument(topic=t, text=" ".join(chunks))
            for t, chunks in sorted(texts.items())
        ]
        matrix = content_mod.tfidf(docs, stopword_set, min_df=self.config.min_df)
        _json_dump(
            matrix.to_dict(),
            self._register("content-matrix", self.out_dir / "content-matrix.json"),
        )
        lang_path = self._register("languages", self.out_dir / "languages.jsonl")
        with open(lang_path, "w", encoding="utf-8") as fh:
            for entry in languages:
                fh.write(json.dumps(entry, ensure_ascii=False, sort_keys=True) + "\n")
        return {
            "documents": len(docs),
            "terms": len(matrix.terms),
            "missing_snapshots": missing,
        }

    # --- clustering over either matrix ---------------------------------------

    def _matrix_path(self, name: str) -> Path:
        return self._require(name.replace("-matrix", ""), f"{name}.json")

    def stage_cluster(self, matrix_name: str) -> dict:
        cfg = self.config
        tag = matrix_name.replace("-matrix", "")
        path = self._register(f"clusters-{tag}", self.out_dir / f"clusters-{tag}.json")
        payload = cluster_file(
            self._matrix_path(matrix_name),
            path,
            pca_n=cfg.pca_n,
            k=cfg.k,
            seed=cfg.seed,
            restarts=cfg.restarts,
            b_refs=cfg.b_refs,
        )
        return {"matrix": matrix_name, "k": payload["k"], "silhouette": payload["silhouette"]}

    def stage_cluster_sweep(self, matrix_name: str) -> dict:
        cfg = self.config
        tag = matrix_name.replace("-matrix", "")
        path = self._register(f"sweep-{tag}", self.out_dir / f"sweep-{tag}.csv")
        sweep = sweep_file(
            self._matrix_path(matrix_name),
            path,
            n_range=cfg.n_range,
            k_range=cfg.k_range,
            seed=cfg.seed,
            restarts=cfg.restarts,
            b_refs=cfg.b_refs,
        )
        return {"matrix": matrix_name, "best": sweep.best}

    # --- plot data ------------------------------------------------------------

    def stage_report(self, strict: bool = False) -> dict:
        emitted, missing = emit_plot_data(self.out_dir, strict=strict)
        for path in emitted:
            self._register(f"plots/{path.name}", path)
        return {"emitted": [p.name for p in emitted], "missing": missing}

    # --- manifest ---------------------------------------------------------------

    def write_manifest(self) -> Path:
        listing = {}
        for name, path in sorted(self.artifacts.items()):
            if not path.exists():
                continue
            try:
                rel = str(path.relative_to(self.out_dir))
            except ValueError:
                rel = str(path)
            listing[name] = {"path": rel, "sha256": _sha256(path)}
        manifest_path = self.out_dir / MANIFEST_NAME
        _json_dump({"artifacts": listing}, manifest_path)
        return manifest_path


def load_matrix_file(path: str | Path) -> tuple[tuple[str, ...], "np.ndarray"]:
    """Load either matrix artifact as (row labels, float matrix).

    The two formats are told apart by their payload key: presence matrices
    carry integer "cells", term-weight matrices carry "weights".
    """
    obj = json.loads(Path(path).read_text("utf-8"))
    if "cells" in obj:
        m = tracking_mod.TrackingMatrix.from_dict(obj)
        return m.topics, m.cells.astype(float)
    m = content_mod.ContentMatrix.from_dict(obj)
    return m.topics, m.weights


def cluster_file(
    matrix_path: str | Path,
    out_path: str | Path,
    pca_n: int,
    k: int,
    seed: int = 42,
    restarts: int = 10,
    b_refs: int = 10,
) -> dict:
    """Reduce a matrix file, cluster it, and write the labeled result."""
    labels, X = load_matrix_file(matrix_path)
    try:
        model, reduced = cluster_mod.pca_fit(X, pca_n)
    except ValueError as exc:
        # infeasible n for this matrix is a data condition, not a crash
        raise PipelineError(f"{Path(matrix_path).name}: {exc}") from exc
    report = cluster_mod.cluster_report(
        reduced, labels, k, seed=seed, restarts=restarts, b_refs=b_refs
    )
    payload = {
        "matrix": Path(matrix_path).name,
        "n": pca_n,
        "k": report.k,
        "seed": report.seed,
        "sse": report.sse,
        "silhouette": report.silhouette,
        "gap": report.gap,
        "degenerate": report.degenerate,
        "rank_deficient": model.rank_deficient,
        "explained_variance_ratio": [float(r) for r in model.explained_variance_ratio],
        "assignments": report.assignments,
        "points": {label: [float(v) for v in row] for label, row in zip(labels, reduced)},
    }
    _json_dump(payload, Path(out_path))
    return payload


def sweep_file(
    matrix_path: str | Path,
    out_path: str | Path,
    n_range: str,
    k_range: str,
    seed: int = 42,
    restarts: int = 10,
    b_refs: int = 10,
):
    """Run the (dimension, cluster count) sweep over a matrix file as CSV."""
    _, X = load_matrix_file(matrix_path)
    sweep = cluster_mod.model_select(
        X,
        parse_range(n_range),
        parse_range(k_range),
        seed=seed,
        restarts=restarts,
        b_refs=b_refs,
    )
    Path(out_path).write_text(sweep.to_csv(), "utf-8")
    return sweep


def emit_plot_data(out_dir: str | Path, strict: bool = False) -> tuple[list[Path], list[str]]:
    """Write plot-ready CSVs for whichever artifacts the bundle holds.

    Returns (emitted paths, missing upstream artifact names).  With
    strict=True a missing upstream raises MissingStage instead of being
    noted.
    """
    out_dir = Path(out_dir)
    plots = out_dir / "plots"
    plots.mkdir(parents=True, exist_ok=True)
    emitted: list[Path] = []
    missing: list[str] = []

    def need(filename: str) -> Path | None:
        path = out_dir / filename
        if path.exists():
            return path
        if strict:
            raise MissingStage(f"{filename} is missing")
        missing.append(filename)
        return None

    def write_csv(name: str, header: str, rows: Iterable[str]) -> None:
        path = plots / name
        path.write_text(header + "\n" + "".join(r + "\n" for r in rows), "utf-8")
        emitted.append(path)

    def fmt(x: float) -> str:
        return f"{x:.12g}"

    # threshold histograms
    hist_dir = out_dir / "histograms"
    if hist_dir.is_dir():
        rows = []
        for csv_path in sorted(hist_dir.glob("*.csv")):
            for line in csv_path.read_text("utf-8").splitlines()[1:]:
                rows.append(f"{csv_path.stem},{line}")
        write_csv("threshold-histograms.csv", "parameter,bucket,count", rows)
    else:
        if strict:
            raise MissingStage("histograms/ is missing")
        missing.append("histograms/")

    # topic coverage across sites
    best_path = need("best.jsonl")
    if best_path:
        rows_raw = [json.loads(line) for line in best_path.read_text("utf-8").splitlines() if line]
        internal_path = out_dir / "internal.jsonl"
        if internal_path.exists():
            sites = {json.loads(line)["site"] for line in internal_path.read_text("utf-8").splitlines() if line}
        else:
            sites = {r["site"] for r in rows_raw}
        per_topic: dict[str, set[str]] = {}
        for r in rows_raw:
            per_topic.setdefault(r["topic"], set()).add(r["site"])
        write_csv(
            "topic-coverage.csv",
            "topic,percent_of_sites",
            [
                f"{topic},{fmt(100.0 * len(covered) / len(sites))}"
                for topic, covered in sorted(per_topic.items())
            ]
            if sites
            else [],
        )

    # tracking analytics
    report_path = need("tracking-report.json")
    if report_path:
        report = json.loads(report_path.read_text("utf-8"))
        write_csv(
            "cookies-per-topic.csv",
            "topic,min,q1,median,mean,q3,max,count",
            [
                f"{t},{fmt(s['min'])},{fmt(s['q1'])},{fmt(s['median'])},"
                f"{fmt(s['mean'])},{fmt(s['q3'])},{fmt(s['max'])},{s['count']}"
                for t, s in sorted(report["cookie_stats"].items())
            ],
        )
        rows = []
        for scope in ("all", "top_sites"):
            breakdown = report["category_breakdown"].get(scope)
            if breakdown is None:
                continue
            for topic, counts in sorted(breakdown.items()):
                for category, count in sorted(counts.items()):
                    rows.append(f"{scope},{topic},{category},{count}")
        write_csv("category-breakdown.csv", "scope,topic,category,distinct_third_parties", rows)
        diff = report.get("percent_diff_vs_homepage")
        if diff:
            write_csv(
                "category-percent-diff.csv",
                "topic,category,percent_or_new",
                [
                    f"{topic},{category},{value if isinstance(value, str) else fmt(value)}"
                    for topic, row in sorted(diff.items())
                    for category, value in sorted(row.items())
                ],
            )
        write_csv(
            "top-tp-heatmap.csv",
            "third_party,topic,percent_of_pages",
            [
                f"{entry['third_party']},{topic},{fmt(pct)}"
                for entry in report["top_tp_coverage"]
                for topic, pct in sorted(entry["coverage"].items())
            ],
        )

    # cluster scatters and metric curves
    for tag in ("tracking", "content"):
        cluster_path = out_dir / f"clusters-{tag}.json"
        if cluster_path.exists():
            payload = json.loads(cluster_path.read_text("utf-8"))
            write_csv(
                f"cluster-scatter-{tag}.csv",
                "label,cluster," + ",".join(f"x{i}" for i in range(payload["n"])),
                [
                    f"{label},{payload['assignments'][label]},"
                    + ",".join(fmt(v) for v in coords)
                    for label, coords in sorted(payload["points"].items())
                ],
            )
        else:
            if strict:
                raise MissingStage(f"clusters-{tag}.json is missing")
            missing.append(f"clusters-{tag}.json")
        sweep_path = out_dir / f"sweep-{tag}.csv"
        if sweep_path.exists():
            target = plots / f"metric-curves-{tag}.csv"
            shutil.copyfile(sweep_path, target)
            emitted.append(target)
        else:
            if strict:
                raise MissingStage(f"sweep-{tag}.csv is missing")
            missing.append(f"sweep-{tag}.csv")

    notes = plots / "notes.txt"
    notes.write_text(
        "".join(f"missing: {name}\n" for name in missing) if missing else "complete\n", "utf-8"
    )
    emitted.append(notes)
    return emitted, missing


def run_pipeline(config: PipelineConfig) -> tuple[int, dict]:
    """Run every stage the configuration enables; returns (exit code, summary).

    Stage failures are collected rather than raised; downstream stages that
    depend on a failed stage are skipped, and the exit code is 0 only when
    nothing failed.
    """
    runner = Runner(config)
    summary: dict[str, object] = {}
    errors: list[tuple[str, str]] = []

    def attempt(name: str, fn: Callable[[], dict]) -> bool:
        try:
            summary[name] = fn()
            return True
        except PipelineError as exc:
            errors.append((name, str(exc)))
            summary[name] = {"error": str(exc)}
            return False

    ok = attempt("fetch", runner.stage_fetch)
    ok = ok and attempt("extract", runner.stage_extract)
    ok = ok and attempt("fit-thresholds", lambda: runner.stage_fit_thresholds())
    ok = ok and attempt("filter", lambda: runner.stage_filter())
    classified = ok and config.embeddings is not None
    if classified:
        classified = attempt("classify", lambda: runner.stage_classify())
        classified = classified and attempt("best-subpages", lambda: runner.stage_best_subpages())
    if classified:
        best_urls = [
            normalize(row["url"])
            for row in classify_mod.read_best_subpages(runner.out_dir / "best.jsonl")
        ]
        attempt("fetch-sections", lambda: runner.stage_fetch(best_urls))
        if config.crawl_logs and config.disconnect:
            if attempt("track", runner.stage_track):
                attempt("cluster-tracking", lambda: runner.stage_cluster("tracking-matrix"))
                attempt("sweep-tracking", lambda: runner.stage_cluster_sweep("tracking-matrix"))
        if attempt("content", runner.stage_content):
            attempt("cluster-content", lambda: runner.stage_cluster("content-matrix"))
            attempt("sweep-content", lambda: runner.stage_cluster_sweep("content-matrix"))
    attempt("report", lambda: runner.stage_report(strict=False))
    runner.write_manifest()
    summary["manifest"] = str(runner.out_dir / MANIFEST_NAME)
    summary["errors"] = [f"{stage}: {message}" for stage, message in errors]
    return (0 if not errors else 1), summary
