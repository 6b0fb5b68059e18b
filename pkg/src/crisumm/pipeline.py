"""End-to-end orchestration: one config in, one reproducible report out.

Every stage's intermediate artifacts and the fully materialized
configuration are embedded in a single JSON report, so a run can be
reproduced from its report alone. Identical inputs produce
byte-identical reports.
"""

from __future__ import annotations

import json
import shutil
from dataclasses import dataclass, field, asdict
from pathlib import Path

from . import corpus, ontology as onto, embeddings as emb_mod
from .categorizer import classify_corpus
from .disaster_sim import DatasetMeta, build_profile, dis_sim, most_similar
from .importance import build_training_pairs, fit, predict_importance
from .rouge import score_summary
from .selector import SelectorConfig, summarize

SCHEMA_VERSION = 1


class PipelineStageError(RuntimeError):
    """A pipeline stage failed; carries the stage name and the cause."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class PipelineConfig:
    """Everything a full run needs; unset paths disable optional stages."""

    ontology: Path
    target: Path
    candidates: list[Path]
    embeddings: Path
    out_dir: Path
    stopwords: Path | None = None
    lexicon: Path | None = None
    merges: Path | None = None
    vocab_docs: list[Path] = field(default_factory=list)
    approvals: Path | None = None
    reference: Path | None = None
    m: int = 10
    use_extended: bool = True
    w1: float = 0.5
    w2: float = 0.5
    top_k: int = 50
    min_freq: int = 3
    regression_kind: str = "linear"
    ridge_alpha: float = 1.0
    prior_precision: float = 1.0
    noise_precision: float = 1.0
    lam: float = 0.5
    sim1_mode: str = "sum"
    selector_kind: str = "dmmr"
    seed: int = 0
    diversity_same_category_only: bool = False
    homogeneous_only: bool = False

    def validate(self) -> None:
        if self.m < 1:
            raise ValueError(f"summary length m must be >= 1, got {self.m}")
        required = [("ontology", self.ontology), ("target", self.target),
                    ("embeddings", self.embeddings)]
        required += [("candidates", p) for p in self.candidates]
        optional = [("stopwords", self.stopwords), ("lexicon", self.lexicon),
                    ("merges", self.merges), ("approvals", self.approvals),
                    ("reference", self.reference)]
        optional += [("vocab_docs", p) for p in self.vocab_docs]
        for name, path in required + [(n, p) for n, p in optional
                                      if p is not None]:
            if not Path(path).exists():
                raise FileNotFoundError(f"{name} path does not exist: {path}")
        if not self.candidates:
            raise ValueError("at least one candidate dataset is required")
        if (self.approvals is None) != (not self.vocab_docs):
            raise ValueError(
                "vocab_docs and approvals enable vocabulary extension "
                "together; set both or neither"
            )

    def as_report_dict(self) -> dict:
        raw = asdict(self)
        out = {}
        for key, value in raw.items():
            if isinstance(value, Path):
                out[key] = str(value)
            elif isinstance(value, list):
                out[key] = [str(v) if isinstance(v, Path) else v
                            for v in value]
            else:
                out[key] = value
        return out


_BOOL_KEYS = {"use_extended", "diversity_same_category_only",
              "homogeneous_only"}
_INT_KEYS = {"m", "top_k", "min_freq", "seed"}
_FLOAT_KEYS = {"w1", "w2", "ridge_alpha", "prior_precision",
               "noise_precision", "lam"}
_STR_KEYS = {"regression_kind", "sim1_mode", "selector_kind"}
_PATH_KEYS = {"ontology", "target", "embeddings", "out_dir", "stopwords",
              "lexicon", "merges", "approvals", "reference"}
_PATH_LIST_KEYS = {"candidates", "vocab_docs"}


def load_config(path: str | Path,
                out_dir: str | Path | None = None) -> PipelineConfig:
    """Parse a "key = value" config file.

    Relative paths are resolved against the config file's directory;
    list values are comma-separated. `out_dir` overrides any value in
    the file.
    """
    path = Path(path)
    base = path.parent
    values: dict = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(),
                                  start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path.name}:{lineno}: expected 'key = value'")
        key, _, raw = line.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key in _BOOL_KEYS:
            if raw.lower() not in ("true", "false"):
                raise ValueError(f"{path.name}:{lineno}: {key} must be "
                                 f"true or false")
            values[key] = raw.lower() == "true"
        elif key in _INT_KEYS:
            values[key] = int(raw)
        elif key in _FLOAT_KEYS:
            values[key] = float(raw)
        elif key in _STR_KEYS:
            values[key] = raw
        elif key in _PATH_KEYS:
            values[key] = (base / raw).resolve() if raw else None
        elif key in _PATH_LIST_KEYS:
            values[key] = [(base / item.strip()).resolve()
                           for item in raw.split(",") if item.strip()]
        else:
            raise ValueError(f"{path.name}:{lineno}: unknown key {key!r}")
    missing = {"ontology", "target", "candidates", "embeddings"} - values.keys()
    if missing:
        raise ValueError(f"{path.name}: missing required keys "
                         f"{sorted(missing)}")
    if out_dir is not None:
        values["out_dir"] = Path(out_dir)
    elif "out_dir" not in values:
        raise ValueError(f"{path.name}: out_dir not set and no override given")
    return PipelineConfig(**values)


def _load_resources(cfg: PipelineConfig):
    stopwords = corpus.load_stopwords(cfg.stopwords) if cfg.stopwords \
        else corpus.default_stopwords()
    lexicon = corpus.load_lexicon(cfg.lexicon) if cfg.lexicon \
        else corpus.default_lexicon()
    ontology = onto.load_ontology(cfg.ontology)
    if cfg.merges:
        ontology = onto.merge_categories(ontology, onto.load_merges(cfg.merges))
    table = emb_mod.load_word2vec_text(cfg.embeddings)
    return stopwords, lexicon, ontology, table


def _write_report(report: dict, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


def run_pipeline(cfg: PipelineConfig) -> dict:
    """Run every configured stage and write the report to cfg.out_dir.

    On a stage failure the partial report is quarantined under
    out_dir/quarantine/report.json and a PipelineStageError naming the
    stage is raised.
    """
    cfg.validate()
    out_dir = Path(cfg.out_dir)
    report: dict = {
        "schema_version": SCHEMA_VERSION,
        "config": cfg.as_report_dict(),
    }
    stage = "load-resources"
    try:
        stopwords, lexicon, ontology, table = _load_resources(cfg)

        stage = "extend-vocab"
        if cfg.vocab_docs and cfg.approvals:
            docs = [Path(p).read_text(encoding="utf-8")
                    for p in cfg.vocab_docs]
            candidates = onto.harvest_candidates(
                ontology, docs, lexicon, min_freq=cfg.min_freq,
                stopwords=stopwords)
            approvals = onto.load_approvals(cfg.approvals)
            ontology = onto.apply_approvals(ontology, candidates, approvals)
            report["vocabulary_extension"] = {
                "candidates": [
                    {"category_id": c.category_id, "word": c.word,
                     "frequency": c.frequency}
                    for c in candidates
                ],
                "approved": {
                    c.id: sorted(c.extended_keywords)
                    for c in ontology.categories if c.extended_keywords
                },
            }
        else:
            report["vocabulary_extension"] = None
        report["ontology"] = {
            "K": ontology.K,
            "categories": [
                {"id": c.id, "name": c.name,
                 "seed_size": len(c.seed_keywords),
                 "extended_size": len(c.extended_keywords)}
                for c in ontology.categories
            ],
        }

        stage = "load-datasets"
        target = corpus.load_tweets(cfg.target, stopwords, lexicon)
        candidates_ds = [corpus.load_tweets(p, stopwords, lexicon)
                         for p in cfg.candidates]
        all_ids = [target.id] + [d.id for d in candidates_ds]
        if len(set(all_ids)) != len(all_ids):
            raise ValueError(f"duplicate dataset ids among {all_ids}")

        stage = "categorize"
        results = {
            ds.id: classify_corpus(ds, ontology, cfg.use_extended)
            for ds in [target] + candidates_ds
        }
        report["datasets"] = {
            ds_id: {
                "total": r.stats.total,
                "classified": r.stats.classified,
                "fraction_classified": r.stats.fraction_classified,
                "fraction_seed": r.stats.fraction_seed,
                "fraction_extended_gain": r.stats.fraction_extended_gain,
                "category_counts": {cid: len(cell)
                                    for cid, cell in r.partition.items()},
            }
            for ds_id, r in results.items()
        }
        report["target_assignments"] = [
            {"tweet_id": a.tweet_id, "category_id": a.category_id,
             "score": a.score, "matched_by": a.matched_by}
            for a in results[target.id].assignments
        ]

        stage = "similarity"
        profiles = {}
        for ds in [target] + candidates_ds:
            meta = DatasetMeta(dataset_id=ds.id,
                               disaster_type=ds.disaster_type,
                               continent=ds.continent)
            profiles[ds.id] = build_profile(results[ds.id].partition,
                                            k=cfg.top_k, meta=meta)
        matrix = {}
        for x in sorted(profiles):
            matrix[x] = {}
            for y in sorted(profiles):
                if x == y:
                    continue
                score = dis_sim(profiles[x], profiles[y], cfg.w1, cfg.w2)
                matrix[x][y] = score.dis_sim
        chosen_id = most_similar(
            profiles[target.id],
            [profiles[d.id] for d in candidates_ds],
            homogeneous_only=cfg.homogeneous_only,
            w1=cfg.w1, w2=cfg.w2,
        )
        chosen_score = dis_sim(profiles[target.id], profiles[chosen_id],
                               cfg.w1, cfg.w2)
        report["similarity"] = {
            "matrix": matrix,
            "most_similar": chosen_id,
            "most_similar_score": {
                "dis_sim": chosen_score.dis_sim,
                "cat_ic": chosen_score.cat_ic,
                "cat_p": chosen_score.cat_p,
            },
        }

        stage = "importance"
        training = next(d for d in candidates_ds if d.id == chosen_id)
        category_ids = ontology.category_ids()
        pairs = build_training_pairs(training,
                                     results[chosen_id].partition,
                                     category_ids)
        model = fit(pairs, cfg.regression_kind,
                    ridge_alpha=cfg.ridge_alpha,
                    prior_precision=cfg.prior_precision,
                    noise_precision=cfg.noise_precision)
        target_partition = results[target.id].partition
        total_classified = sum(len(c) for c in target_partition.values())
        fractions = {cid: len(target_partition.get(cid, ())) / total_classified
                     for cid in category_ids}
        available = {cid: len(target_partition.get(cid, ()))
                     for cid in category_ids}
        importance = predict_importance(model, fractions, available, cfg.m)
        model_info = {
            "kind": model.kind,
            "slope": model.slope,
            "intercept": model.intercept,
        }
        if model.kind == "bayesian":
            model_info["predictive_variance"] = {
                cid: model.predictive_variance(fractions[cid])
                for cid in sorted(category_ids)
            }
        report["importance"] = {
            "training_disaster": chosen_id,
            "training_pairs": [[x, y] for x, y in pairs],
            "model": model_info,
            "importance": dict(sorted(importance.counts.items())),
        }

        stage = "summarize"
        selector_cfg = SelectorConfig(
            lam=cfg.lam,
            sim1_mode=cfg.sim1_mode,
            selector_kind=cfg.selector_kind,
            seed=cfg.seed,
            diversity_same_category_only=cfg.diversity_same_category_only,
        )
        vocab_by_category = {
            c.id: c.vocabulary(cfg.use_extended) for c in ontology.categories
        }
        summary = summarize(target_partition, importance, vocab_by_category,
                            table, selector_cfg)
        tweets_by_id = {t.id: t for t in target.tweets}
        summary_lines = [
            " ".join(tweets_by_id[e.tweet_id].raw_text.split())
            for e in summary.entries
        ]
        report["summary"] = {
            "entries": [
                {"tweet_id": e.tweet_id, "category_id": e.category_id,
                 "score": e.score}
                for e in summary.entries
            ],
            "text": summary_lines,
        }

        stage = "evaluate"
        if cfg.reference:
            reference_lines = Path(cfg.reference).read_text(
                encoding="utf-8").splitlines()
            cand_tokens = [tok for line in summary_lines
                           for tok in corpus.preprocess_text(line, stopwords)]
            ref_tokens = [tok for line in reference_lines
                          for tok in corpus.preprocess_text(line, stopwords)]
            report["rouge"] = score_summary(cand_tokens, ref_tokens).as_dict()
        else:
            report["rouge"] = None
    except Exception as exc:
        quarantine = out_dir / "quarantine"
        if quarantine.exists():
            shutil.rmtree(quarantine)
        _write_report(report, quarantine / "report.json")
        raise PipelineStageError(stage, exc) from exc

    stage = "write-outputs"
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_report(report, out_dir / "report.json")
    (out_dir / "summary.txt").write_text(
        "".join(line + "\n" for line in report["summary"]["text"]),
        encoding="utf-8")
    _write_report(report["summary"], out_dir / "summary.json")
    return report
