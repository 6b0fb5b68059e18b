"""Phase III: pick representative tweets per category.

The default selector greedily maximizes a marginal-relevance score:
embedding similarity of a tweet to the category vocabulary, penalized
by keyword overlap with whatever the summary already contains. Five
alternative selectors (pure relevance ranking, k-means medoids,
eigenvector centrality, PageRank, and classic query-free MMR) share
the same per-category interface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .corpus import Tweet
from .embeddings import EmbeddingTable, cosine
from .importance import ImportanceVector

SELECTOR_KINDS = ("dmmr", "max_sim", "kmeans", "eigenvector", "pagerank",
                  "mmr")
SIM1_MODES = ("sum", "mean")

POWER_ITERATIONS = 100
POWER_TOLERANCE = 1e-10
PAGERANK_DAMPING = 0.85


@dataclass(frozen=True)
class SelectorConfig:
    """Tunables for tweet selection.

    `lam` trades relevance against diversity (1.0 means relevance
    only). `seed` is recorded for provenance; all shipped selectors,
    including k-means with its farthest-point initialization, are
    fully deterministic.
    """

    lam: float = 0.5
    sim1_mode: str = "sum"
    selector_kind: str = "dmmr"
    seed: int = 0
    diversity_same_category_only: bool = False

    def __post_init__(self) -> None:
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"lambda must lie in [0, 1], got {self.lam}")
        if self.sim1_mode not in SIM1_MODES:
            raise ValueError(f"unknown sim1 mode {self.sim1_mode!r}")
        if self.selector_kind not in SELECTOR_KINDS:
            raise ValueError(f"unknown selector {self.selector_kind!r}")


@dataclass(frozen=True)
class SummaryEntry:
    tweet_id: str
    category_id: str
    score: float


@dataclass(frozen=True)
class Summary:
    """Selected tweets in selection order, with their provenance."""

    entries: tuple[SummaryEntry, ...]
    importance: ImportanceVector
    config: SelectorConfig

    def __post_init__(self) -> None:
        ids = [e.tweet_id for e in self.entries]
        if len(set(ids)) != len(ids):
            raise ValueError("a tweet appears twice in the summary")
        per_category: dict[str, int] = {}
        for entry in self.entries:
            per_category[entry.category_id] = \
                per_category.get(entry.category_id, 0) + 1
        expected = {cid: n for cid, n in self.importance.counts.items() if n}
        if per_category != expected:
            raise ValueError(
                f"summary category counts {per_category} do not match the "
                f"importance vector {expected}"
            )

    def tweet_ids(self) -> tuple[str, ...]:
        return tuple(e.tweet_id for e in self.entries)


def sim1(tweet: Tweet, vocab: Iterable[str], emb: EmbeddingTable,
         mode: str = "sum") -> float:
    """Embedding similarity of a tweet's keywords to a vocabulary.

    Each keyword contributes the best cosine it achieves against any
    vocabulary word that has an embedding, floored at 0; keywords
    without an embedding contribute nothing. "sum" adds the
    contributions, "mean" divides by the keyword count.
    """
    vocab_vecs = [emb.get(w) for w in sorted(set(vocab)) if w in emb]
    contributions = []
    for word in sorted(tweet.keywords):
        vec = emb.get(word)
        if vec is None or not vocab_vecs:
            contributions.append(0.0)
            continue
        best = max(cosine(vec, other) for other in vocab_vecs)
        contributions.append(max(best, 0.0))
    total = math.fsum(contributions)
    if mode == "mean":
        return total / len(tweet.keywords) if tweet.keywords else 0.0
    if mode != "sum":
        raise ValueError(f"unknown sim1 mode {mode!r}")
    return total


def sim2(a: Tweet, b: Tweet) -> float:
    """Keyword-set cosine between two tweets, in [0, 1]."""
    if not a.keywords or not b.keywords:
        return 0.0
    overlap = len(a.keywords & b.keywords)
    return overlap / math.sqrt(len(a.keywords) * len(b.keywords))


def _diversity_pool(summary_so_far: Sequence[tuple[Tweet, str]],
                    category_id: str, cfg: SelectorConfig) -> list[Tweet]:
    if cfg.diversity_same_category_only:
        return [t for t, cid in summary_so_far if cid == category_id]
    return [t for t, _ in summary_so_far]


def dmmr_select(tweets: Sequence[Tweet], count: int, vocab: Iterable[str],
                emb: EmbeddingTable, cfg: SelectorConfig,
                summary_so_far: Sequence[tuple[Tweet, str]] = (),
                category_id: str = "",
                ) -> list[tuple[Tweet, float]]:
    """Greedy marginal-relevance selection of `count` tweets.

    Each step takes the remaining tweet maximizing
    lam * sim1(tweet, vocab) - (1 - lam) * max sim2 against the summary
    so far (including tweets picked earlier in this call); the maximum
    over an empty summary is 0 and ties go to the smaller tweet id.
    """
    if count > len(tweets):
        raise ValueError(
            f"cannot select {count} tweets from a pool of {len(tweets)}"
        )
    vocab = frozenset(vocab)
    remaining = sorted(tweets, key=lambda t: t.id)
    relevance = {t.id: sim1(t, vocab, emb, cfg.sim1_mode) for t in remaining}
    pool = list(summary_so_far)
    picked: list[tuple[Tweet, float]] = []
    for _ in range(count):
        diversity_targets = _diversity_pool(pool, category_id, cfg)
        best = None
        best_score = -math.inf
        for tweet in remaining:
            redundancy = max(
                (sim2(tweet, other) for other in diversity_targets),
                default=0.0,
            )
            score = cfg.lam * relevance[tweet.id] \
                - (1.0 - cfg.lam) * redundancy
            if score > best_score:
                best, best_score = tweet, score
        picked.append((best, best_score))
        pool.append((best, category_id))
        remaining.remove(best)
    return picked


def _tweet_vector(tweet: Tweet, emb: EmbeddingTable) -> np.ndarray:
    """Mean of the tweet's keyword embeddings (zero vector if none)."""
    vecs = [emb.get(w) for w in sorted(tweet.keywords) if w in emb]
    if not vecs:
        return np.zeros(emb.dimension)
    return np.mean(np.stack(vecs), axis=0)


def _kmeans_select(tweets: Sequence[Tweet], count: int,
                   emb: EmbeddingTable) -> list[tuple[Tweet, float]]:
    """k-means over mean-keyword-embedding vectors; one medoid per cluster.

    Initialization is deterministic: the first centroid sits on the
    tweet with the smallest id, the rest follow farthest-point order
    (max distance to the nearest chosen centroid, ties by id). When
    there are more clusters than distinct vectors, the surplus
    centroids land on remaining tweets in id order.
    """
    ordered = sorted(tweets, key=lambda t: t.id)
    vectors = {t.id: _tweet_vector(t, emb) for t in ordered}

    centroids: list[np.ndarray] = []
    used: list[str] = []
    for _ in range(count):
        best_id = None
        best_dist = -1.0
        for t in ordered:
            if t.id in used:
                continue
            if centroids:
                dist = min(float(np.linalg.norm(vectors[t.id] - c))
                           for c in centroids)
            else:
                dist = 0.0
            if dist > best_dist:
                best_id, best_dist = t.id, dist
        used.append(best_id)
        centroids.append(vectors[best_id].copy())

    assignment: dict[str, int] = {}
    for _ in range(POWER_ITERATIONS):
        new_assignment = {}
        for t in ordered:
            dists = [float(np.linalg.norm(vectors[t.id] - c))
                     for c in centroids]
            new_assignment[t.id] = int(np.argmin(dists))
        if new_assignment == assignment:
            break
        assignment = new_assignment
        for idx in range(count):
            members = [vectors[tid] for tid, a in assignment.items()
                       if a == idx]
            if members:
                centroids[idx] = np.mean(np.stack(members), axis=0)

    picked: list[tuple[Tweet, float]] = []
    taken: set[str] = set()
    for idx in range(count):
        members = [t for t in ordered
                   if assignment[t.id] == idx and t.id not in taken]
        pool = members if members else [t for t in ordered
                                        if t.id not in taken]
        choice = min(
            pool,
            key=lambda t: (float(np.linalg.norm(vectors[t.id]
                                                - centroids[idx])), t.id),
        )
        taken.add(choice.id)
        distance = float(np.linalg.norm(vectors[choice.id] - centroids[idx]))
        picked.append((choice, -distance))
    return picked


def _sim2_matrix(tweets: Sequence[Tweet]) -> np.ndarray:
    n = len(tweets)
    matrix = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            value = sim2(tweets[i], tweets[j])
            matrix[i, j] = value
            matrix[j, i] = value
    return matrix


def _eigenvector_scores(matrix: np.ndarray) -> np.ndarray:
    """Principal-eigenvector scores via power iteration."""
    n = matrix.shape[0]
    x = np.full(n, 1.0 / n)
    for _ in range(POWER_ITERATIONS):
        nxt = matrix @ x
        norm = float(np.linalg.norm(nxt))
        if norm == 0.0:
            break
        nxt = nxt / norm
        if float(np.sum(np.abs(nxt - x))) < POWER_TOLERANCE:
            x = nxt
            break
        x = nxt
    return x


def _pagerank_scores(matrix: np.ndarray) -> np.ndarray:
    """PageRank over the weighted similarity graph.

    Rows with no outgoing weight spread their mass uniformly.
    """
    n = matrix.shape[0]
    row_sums = matrix.sum(axis=1)
    x = np.full(n, 1.0 / n)
    d = PAGERANK_DAMPING
    for _ in range(POWER_ITERATIONS):
        dangling = float(np.sum(x[row_sums == 0.0])) / n
        spread = np.zeros(n)
        for j in range(n):
            if row_sums[j] > 0.0:
                spread += x[j] * matrix[j] / row_sums[j]
        nxt = (1.0 - d) / n + d * (spread + dangling)
        if float(np.sum(np.abs(nxt - x))) < POWER_TOLERANCE:
            x = nxt
            break
        x = nxt
    return x


def _rank_select(tweets: Sequence[Tweet], count: int,
                 scores: Mapping[str, float]) -> list[tuple[Tweet, float]]:
    ranked = sorted(tweets, key=lambda t: (-scores[t.id], t.id))
    return [(t, scores[t.id]) for t in ranked[:count]]


def ablation_select(kind: str, tweets: Sequence[Tweet], count: int,
                    vocab: Iterable[str], emb: EmbeddingTable,
                    cfg: SelectorConfig,
                    summary_so_far: Sequence[tuple[Tweet, str]] = (),
                    category_id: str = "",
                    corpus_vocab: Iterable[str] = (),
                    ) -> list[tuple[Tweet, float]]:
    """Run one of the alternative per-category selectors.

    max_sim      pure relevance ranking, no diversity term.
    kmeans       cluster medoids over keyword-embedding vectors.
    eigenvector  centrality on the complete keyword-cosine graph.
    pagerank     damped random-walk rank on the same graph.
    mmr          the greedy loop, but relevance is measured against
                 the union of all category vocabularies.
    """
    if count > len(tweets):
        raise ValueError(
            f"cannot select {count} tweets from a pool of {len(tweets)}"
        )
    if kind == "max_sim":
        scores = {t.id: sim1(t, vocab, emb, cfg.sim1_mode) for t in tweets}
        return _rank_select(tweets, count, scores)
    if kind == "kmeans":
        return _kmeans_select(tweets, count, emb) if count else []
    if kind in ("eigenvector", "pagerank"):
        ordered = sorted(tweets, key=lambda t: t.id)
        matrix = _sim2_matrix(ordered)
        values = _eigenvector_scores(matrix) if kind == "eigenvector" \
            else _pagerank_scores(matrix)
        scores = {t.id: float(values[i]) for i, t in enumerate(ordered)}
        return _rank_select(ordered, count, scores)
    if kind == "mmr":
        return dmmr_select(tweets, count, corpus_vocab, emb, cfg,
                           summary_so_far, category_id)
    raise ValueError(f"unknown ablation selector {kind!r}")


def summarize(partition: Mapping[str, Sequence[Tweet]],
              importance: ImportanceVector,
              vocab_by_category: Mapping[str, frozenset[str]],
              emb: EmbeddingTable, cfg: SelectorConfig) -> Summary:
    """Fill every category's slots with the configured selector.

    Categories are visited in ascending id order and share one growing
    summary, so diversity-aware selectors see picks from earlier
    categories.
    """
    corpus_vocab = frozenset().union(*vocab_by_category.values()) \
        if vocab_by_category else frozenset()
    summary_so_far: list[tuple[Tweet, str]] = []
    entries: list[SummaryEntry] = []
    for cid in sorted(importance.counts):
        need = importance.counts[cid]
        if need == 0:
            continue
        tweets = partition.get(cid, ())
        if need > len(tweets):
            raise ValueError(
                f"importance asks for {need} tweets from category {cid!r} "
                f"but only {len(tweets)} are available"
            )
        vocab = vocab_by_category.get(cid, frozenset())
        if cfg.selector_kind == "dmmr":
            picks = dmmr_select(tweets, need, vocab, emb, cfg,
                                summary_so_far, cid)
        else:
            picks = ablation_select(cfg.selector_kind, tweets, need, vocab,
                                    emb, cfg, summary_so_far, cid,
                                    corpus_vocab)
        for tweet, score in picks:
            entries.append(SummaryEntry(tweet_id=tweet.id, category_id=cid,
                                        score=score))
            summary_so_far.append((tweet, cid))
    return Summary(entries=tuple(entries), importance=importance, config=cfg)
