"""Trigram hidden Markov model tagger with Viterbi decoding.

Used to bootstrap labels for raw text before any neural model exists.
Add-k smoothed maximum likelihood:

    P(t | u, v) = (count(u,v,t) + k) / (count(u,v) + k·|T|)
    P(w | t)    = (count(w,t) + k) / (count(t) + k·V)

where V counts distinct training words plus one slot for unseen words,
so each emission distribution sums to 1 with the unseen mass included
once. Sentence-initial context is two synthetic START tags; there is no
explicit STOP transition.
"""

import json
import math
from collections import Counter
from dataclasses import dataclass

from .errors import EmptyCorpus, EmptySentence, InvalidSmoothing
from .preprocess import preprocess_document

START = "<START>"


@dataclass
class HmmModel:
    tagset: list[str]  # real tags, sorted
    transition: dict[tuple[str, str], dict[str, float]]  # seen contexts only
    emission: dict[str, dict[str, float]]  # tag → word → prob, training words
    emission_unseen: dict[str, float]  # tag → mass of one unseen word
    k: float
    vocab_size: int  # distinct training words + 1

    def transition_prob(self, u: str, v: str, t: str) -> float:
        row = self.transition.get((u, v))
        if row is None:
            # Unseen context: counts are all zero, add-k reduces to uniform.
            return 1.0 / len(self.tagset)
        return row[t]

    def emission_prob(self, tag: str, word: str) -> float:
        return self.emission[tag].get(word, self.emission_unseen[tag])


def train_hmm(corpus, k: float = 0.01) -> HmmModel:
    """Estimate smoothed transition and emission tables from labeled sentences."""
    if k <= 0:
        raise InvalidSmoothing(f"smoothing constant must be > 0, got {k}")
    if not corpus:
        raise EmptyCorpus("cannot train an HMM on an empty corpus")

    trigram_counts: Counter = Counter()
    context_counts: Counter = Counter()
    emit_counts: Counter = Counter()
    tag_counts: Counter = Counter()
    words = set()
    for sentence in corpus:
        u, v = START, START
        for word, tag in sentence:
            trigram_counts[(u, v, tag)] += 1
            context_counts[(u, v)] += 1
            emit_counts[(word, tag)] += 1
            tag_counts[tag] += 1
            words.add(word)
            u, v = v, tag

    tagset = sorted(tag_counts)
    n_tags = len(tagset)
    vocab_size = len(words) + 1

    transition = {}
    for (u, v), total in context_counts.items():
        transition[(u, v)] = {
            t: (trigram_counts[(u, v, t)] + k) / (total + k * n_tags) for t in tagset
        }
    emission = {}
    emission_unseen = {}
    for t in tagset:
        denom = tag_counts[t] + k * vocab_size
        emission[t] = {w: (emit_counts[(w, t)] + k) / denom for w in sorted(words)}
        emission_unseen[t] = k / denom
    return HmmModel(tagset, transition, emission, emission_unseen, k, vocab_size)


def sequence_log_prob(tokens: list[str], tags: list[str], hmm: HmmModel) -> float:
    """Log probability of one (token, tag) path under the model.

    The Viterbi recurrence accumulates its scores with this exact
    operation order, so equal paths score bit-identically either way.
    """
    score = 0.0
    u, v = START, START
    for word, tag in zip(tokens, tags):
        score = score + math.log(hmm.transition_prob(u, v, tag)) + math.log(
            hmm.emission_prob(tag, word)
        )
        u, v = v, tag
    return score


def viterbi(tokens: list[str], hmm: HmmModel) -> list[str]:
    """Most probable tag sequence; ties go to the lexicographically smallest.

    Dynamic program over (previous tag, current tag) pair states. Each
    state carries its best prefix so exact score ties can compare whole
    sequences, which is what the tie-break rule is defined over.
    """
    tags, _ = viterbi_with_score(tokens, hmm)
    return tags


def viterbi_with_score(tokens: list[str], hmm: HmmModel) -> tuple[list[str], float]:
    if not tokens:
        raise EmptySentence("cannot decode an empty token list")
    tagset = hmm.tagset
    # state (u, v) → (score, prefix tag tuple)
    best: dict[tuple[str, str], tuple[float, tuple[str, ...]]] = {}
    first = tokens[0]
    for t in tagset:
        score = 0.0 + math.log(hmm.transition_prob(START, START, t)) + math.log(
            hmm.emission_prob(t, first)
        )
        best[(START, t)] = (score, (t,))
    for word in tokens[1:]:
        nxt: dict[tuple[str, str], tuple[float, tuple[str, ...]]] = {}
        for (u, v), (score, prefix) in best.items():
            for t in tagset:
                cand = score + math.log(hmm.transition_prob(u, v, t)) + math.log(
                    hmm.emission_prob(t, word)
                )
                key = (v, t)
                incumbent = nxt.get(key)
                if (
                    incumbent is None
                    or cand > incumbent[0]
                    or (cand == incumbent[0] and prefix + (t,) < incumbent[1])
                ):
                    nxt[key] = (cand, prefix + (t,))
        best = nxt
    winner_score, winner = None, None
    for score, seq in best.values():
        if winner is None or score > winner_score or (score == winner_score and seq < winner):
            winner_score, winner = score, seq
    return list(winner), winner_score


def bootstrap_label(raw_texts: list[str], hmm: HmmModel) -> list[list[tuple[str, str]]]:
    """Preprocess raw texts and Viterbi-tag them into a labeled corpus."""
    labeled = []
    for text in raw_texts:
        for tokens in preprocess_document(text):
            tags = viterbi(tokens, hmm)
            labeled.append(list(zip(tokens, tags)))
    return labeled


def dump_hmm(hmm: HmmModel) -> str:
    """Structured-text dump of the probability tables, for inspection."""
    payload = {
        "tagset": hmm.tagset,
        "k": hmm.k,
        "vocab_size": hmm.vocab_size,
        "transition": {f"{u} {v}": row for (u, v), row in sorted(hmm.transition.items())},
        "emission": hmm.emission,
        "emission_unseen": hmm.emission_unseen,
    }
    return json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True)
