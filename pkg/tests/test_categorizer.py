import numpy as np
import pytest

from crisumm.categorizer import (CategoryAssignment, classify,
                                 classify_corpus, sem_sim)
from crisumm.corpus import DisasterDataset
from crisumm.ontology import Category, Ontology

from oracles import make_tweet


def make_ontology(**vocab):
    categories = []
    for cid, words in sorted(vocab.items()):
        if isinstance(words, tuple):
            seeds, extended = words
        else:
            seeds, extended = words, ()
        categories.append(Category(id=cid, name=cid,
                                   seed_keywords=frozenset(seeds),
                                   extended_keywords=frozenset(extended)))
    return Ontology(categories=tuple(categories))


class TestSemSim:
    def test_partial_overlap(self):
        tweet = make_tweet("t", {"flood", "rescue", "road"})
        cat = Category(id="c", name="c",
                       seed_keywords=frozenset({"flood", "water"}))
        assert sem_sim(tweet, cat, use_extended=False) == 1

    def test_empty_keywords(self):
        cat = Category(id="c", name="c", seed_keywords=frozenset({"x"}))
        assert sem_sim(make_tweet("t", set()), cat, True) == 0

    def test_full_overlap(self):
        vocab = {"flood", "water", "dam"}
        cat = Category(id="c", name="c", seed_keywords=frozenset(vocab))
        assert sem_sim(make_tweet("t", vocab), cat, True) == len(vocab)

    def test_extended_toggle(self):
        cat = Category(id="c", name="c", seed_keywords=frozenset({"a"}),
                       extended_keywords=frozenset({"b"}))
        tweet = make_tweet("t", {"b"})
        assert sem_sim(tweet, cat, use_extended=False) == 0
        assert sem_sim(tweet, cat, use_extended=True) == 1


class TestClassify:
    def test_argmax(self):
        onto = make_ontology(infra={"road", "bridge"}, needs={"water"})
        tweet = make_tweet("t", {"road", "bridge", "water"})
        result = classify(tweet, onto, True)
        assert result.category_id == "infra"
        assert result.score == 2

    def test_zero_overlap_is_unclassified(self):
        onto = make_ontology(infra={"road"})
        result = classify(make_tweet("t", {"zzz"}), onto, True)
        assert result.category_id is None
        assert result.score == 0
        assert result.matched_by == "none"

    def test_tie_breaks_to_smaller_id(self):
        onto = make_ontology(a={"x", "y"}, b={"x", "y"})
        result = classify(make_tweet("t", {"x", "y"}), onto, True)
        assert result.category_id == "a"

    def test_matched_by_flavors(self):
        onto = make_ontology(c=({"seedw"}, {"extw"}))
        assert classify(make_tweet("t", {"seedw"}), onto, True).matched_by \
            == "seed"
        assert classify(make_tweet("t", {"extw"}), onto, True).matched_by \
            == "extended"
        assert classify(make_tweet("t", {"seedw", "extw"}), onto,
                        True).matched_by == "both"

    def test_assignment_invariant_enforced(self):
        with pytest.raises(ValueError):
            CategoryAssignment("t", None, 2, "seed")
        with pytest.raises(ValueError):
            CategoryAssignment("t", "c", 0, "seed")


class TestClassifyCorpus:
    def _dataset(self, tweets):
        return DisasterDataset(id="d", tweets=tuple(tweets),
                               disaster_type="natural", continent="asia")

    def test_constructed_corpus_fully_classified(self, target_dataset,
                                                 extended_ontology,
                                                 target_labels):
        result = classify_corpus(target_dataset, extended_ontology, True)
        assert result.stats.classified == result.stats.total == 70
        for assignment in result.assignments:
            assert assignment.category_id == target_labels[assignment.tweet_id]

    def test_oov_tweet_excluded(self):
        onto = make_ontology(c={"flood"})
        tweets = [make_tweet("t1", {"flood"}), make_tweet("t2", {"zzz"})]
        result = classify_corpus(self._dataset(tweets), onto, True)
        assert result.unclassified == ("t2",)
        assert result.stats.fraction_classified == 0.5

    def test_partition_cells_cover_corpus(self, target_dataset,
                                          extended_ontology):
        result = classify_corpus(target_dataset, extended_ontology, True)
        seen = [t.id for cell in result.partition.values() for t in cell]
        assert len(seen) == len(set(seen))
        assert set(seen) | set(result.unclassified) == \
            {t.id for t in target_dataset.tweets}
        for cid, cell in result.partition.items():
            assert all(t.category == cid for t in cell)

    def test_stats_mirror_vocabulary_columns(self, target_dataset,
                                             extended_ontology):
        result = classify_corpus(target_dataset, extended_ontology, True)
        assert result.stats.seed_classified == 60
        assert result.stats.extended_gain == 10
        seed_only = classify_corpus(target_dataset, extended_ontology, False)
        assert seed_only.stats.classified == 60
        assert seed_only.stats.extended_gain == 0

    def test_extension_never_unclassifies(self):
        rng = np.random.default_rng(17)
        words = [f"w{i}" for i in range(10)]
        for _ in range(200):
            seeds_a = set(rng.choice(words, 2, replace=False))
            ext_a = set(rng.choice(words, 2, replace=False)) - seeds_a
            onto = make_ontology(
                a=(seeds_a, ext_a),
                b=(set(rng.choice(words, 2, replace=False)), set()),
            )
            tweet = make_tweet(
                "t", set(rng.choice(words, int(rng.integers(1, 5)),
                                    replace=False)))
            seed_hit = classify(tweet, onto, False).category_id
            ext_hit = classify(tweet, onto, True).category_id
            if seed_hit is not None:
                assert ext_hit is not None

    def test_determinism(self, target_dataset, extended_ontology):
        a = classify_corpus(target_dataset, extended_ontology, True)
        b = classify_corpus(target_dataset, extended_ontology, True)
        assert a.assignments == b.assignments
        assert a.partition == b.partition
