"""Deterministic synthetic stand-in corpora.

No annotated revision corpus ships with this package, so tests and demos use
generated data engineered to match the documented headline statistics: 940
pairs splitting 784/156 under majority voting, 748 items at majority >= 5
splitting 658/90, full-corpus Fleiss kappa ~= 0.199 (Slight) and ~= 0.263
(Fair) on the >= 5 subset. The vote-split composition below was solved
offline against the kappa formula and is frozen; the generator only decides
sentence text, which carries a learnable improvement signal (evidence added,
typos fixed vs. information deleted, typos introduced).

Also provides a scientific-prose SGML fixture with inline <ins>/<del> edits
standing in for professionally proofread data.
"""

import random

from revjudge.corpus import BETTER, NOT_BETTER, AnnotationSet, RevisionPair

DEFAULT_SEED = 94017

# (majority label, winning votes, item count); solved so that the full 940
# items give kappa 0.19893 and the majority>=5 subset gives 0.26300
VOTE_SPLITS = (
    (BETTER, 7, 81),
    (BETTER, 6, 571),
    (BETTER, 5, 6),
    (BETTER, 4, 126),
    (NOT_BETTER, 7, 30),
    (NOT_BETTER, 6, 40),
    (NOT_BETTER, 5, 20),
    (NOT_BETTER, 4, 66),
)

_SUBJECTS = (
    "The students", "Many writers", "Our team", "The author", "Most readers",
    "The committee", "Several teachers", "The community", "Young people",
    "The researchers", "Local families", "The workers",
)
_VERBS = (
    "discuss", "support", "improve", "describe", "consider", "examine",
    "share", "change", "develop", "explore", "organize", "evaluate",
)
_OBJECTS = (
    "the argument", "their essays", "the main idea", "social habits",
    "the new plan", "online communication", "the writing process",
    "their daily routines", "the school policy", "modern technology",
    "the reading list", "public opinion",
)
_TAILS = (
    "with great care", "in small groups", "during the semester",
    "at every meeting", "without much effort", "in recent years",
    "across the whole school", "through open discussion",
)
_EVIDENCE = (
    "because the survey showed a 40 percent increase",
    "as the 2015 report of the committee stated",
    "since 3 of the 5 studies support it",
    "because attendance grew by 120 students",
    "as Room 204 filled within 15 minutes",
    "since the March survey counted 85 replies",
)
_VAGUE_TO_SPECIFIC = (
    ("soon", "on March 3"),
    ("many people", "312 students"),
    ("a lot", "by 45 percent"),
    ("somewhere", "in Room 204"),
    ("things", "three revision habits"),
)
_CONNECTIVES = ("However", "Moreover", "Therefore", "Furthermore")


def _typo(rng, word):
    """Corrupt a word so it falls outside the bundled dictionary."""
    w = word
    for _ in range(10):
        mode = rng.randrange(3)
        i = rng.randrange(len(w) - 1) if len(w) > 1 else 0
        if mode == 0 and len(w) > 3:
            cand = w[:i] + w[i + 1:]
        elif mode == 1:
            cand = w[:i] + w[i] + w[i:]
        else:
            cand = w[:i] + w[i + 1] + w[i] + w[i + 2:] if len(w) > i + 2 else w + w[-1]
        if cand != word:
            return cand
    return word + word[-1]


def _base_sentence(rng):
    parts = [rng.choice(_SUBJECTS), rng.choice(_VERBS), rng.choice(_OBJECTS)]
    if rng.random() < 0.6:
        parts.append(rng.choice(_TAILS))
    return " ".join(parts) + "."


def _improve(rng, s1, strength):
    """Return (s1, s2) where s2 reads as an improvement of s1. Moves compose:
    each edits only the side it is about, so earlier moves survive."""
    s2 = s1
    moves = 1 + (1 if strength >= 6 and rng.random() < 0.7 else 0)
    for _ in range(moves):
        roll = rng.random()
        if roll < 0.40:
            s2 = s2[:-1].rstrip() + " " + rng.choice(_EVIDENCE) + "."
        elif roll < 0.60:
            # s1 carries a typo that s2 fixed
            words = s1[:-1].split()
            k = rng.randrange(1, len(words))
            words[k] = _typo(rng, words[k])
            s1 = " ".join(words) + "."
        elif roll < 0.80:
            vague, precise = rng.choice(_VAGUE_TO_SPECIFIC)
            s1 = s1[:-1].rstrip() + " " + vague + "."
            s2 = s2[:-1].rstrip() + " " + precise + "."
        else:
            s2 = rng.choice(_CONNECTIVES) + ", " + s2[0].lower() + s2[1:]
    if s2 == s1:
        s2 = s1[:-1].rstrip() + " " + rng.choice(_EVIDENCE) + "."
    return s1, s2


def _worsen(rng, s1, strength):
    """Return (s1, s2) where s2 reads as a regression from s1."""
    s2 = s1
    moves = 1 + (1 if strength >= 6 and rng.random() < 0.7 else 0)
    for _ in range(moves):
        roll = rng.random()
        if roll < 0.35:
            # s1 had supporting material that s2 lacks
            s1 = s1[:-1].rstrip() + " " + rng.choice(_EVIDENCE) + "."
        elif roll < 0.60:
            words = s2[:-1].split()
            k = rng.randrange(1, len(words))
            words[k] = _typo(rng, words[k])
            s2 = " ".join(words) + "."
        elif roll < 0.80:
            words = s2[:-1].split()
            k = rng.randrange(len(words))
            words.insert(k, words[k])
            s2 = " ".join(words) + "."
        else:
            s2 = s2[0].lower() + s2[1:]
    if s2 == s1:
        s2 = s2[0].lower() + s2[1:] if s2[0].isupper() else s2 + " again."
    return s1, s2


def _vote_tuple(rng, majority, wins):
    votes = [majority] * wins
    other = NOT_BETTER if majority == BETTER else BETTER
    votes += [other] * (7 - wins)
    rng.shuffle(votes)
    return tuple(votes)


def generate_corpus(seed: int = DEFAULT_SEED):
    """940 (RevisionPair, AnnotationSet) entries matching the frozen vote
    composition, in a deterministic shuffled order."""
    rng = random.Random(seed)
    entries = []
    idx = 0
    for majority, wins, count in VOTE_SPLITS:
        for _ in range(count):
            s1 = _base_sentence(rng)
            if majority == BETTER:
                s1, s2 = _improve(rng, s1, wins)
            else:
                s1, s2 = _worsen(rng, s1, wins)
            pid = f"ar-{idx:04d}"
            pair = RevisionPair(
                id=pid, s1=s1, s2=s2, source="ArgRewrite",
                meta={"essay": f"e{idx % 60:02d}", "majority_size": str(wins)})
            ann = AnnotationSet(pair_id=pid, labels=_vote_tuple(rng, majority, wins))
            entries.append((pair, ann))
            idx += 1
    rng.shuffle(entries)
    return entries


_SCI_SUBJECTS = (
    "The balance equations", "The boundary conditions", "The numerical results",
    "The proposed method", "The second experiment", "The error estimates",
    "The model parameters", "The measurement errors", "The simulation results",
    "The convergence rates",
)
_SCI_VERBS = ("are formulated", "are solved", "are compared", "are presented",
              "are analyzed", "are discussed", "are evaluated", "are derived")
_SCI_TAILS = ("in Section 2", "for the general case", "in the appendix",
              "under mild assumptions", "for both test problems",
              "with second order accuracy", "on the finest grid")
_PLACEHOLDERS = ("MATH", "MATHDISP", "CITE", "REF")


def _sci_sentence(rng, with_placeholder):
    parts = [rng.choice(_SCI_SUBJECTS), rng.choice(_SCI_VERBS), rng.choice(_SCI_TAILS)]
    if with_placeholder:
        parts.insert(rng.randrange(1, 3), rng.choice(_PLACEHOLDERS))
    return " ".join(parts)


def _escape(text):
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _edit_sentence(rng, text):
    """Insert <ins>/<del> markup representing a proofreading improvement.
    `text` is already XML-escaped; the vocabulary contains no markup chars."""
    words = text.split()
    roll = rng.random()
    if roll < 0.30:
        k = rng.randrange(1, len(words))
        words[k - 1] = words[k - 1] + "<ins>,</ins>"
    elif roll < 0.55:
        k = rng.randrange(1, len(words))
        bad = _typo(rng, words[k])
        words[k] = f"<del>{bad}</del><ins>{words[k]}</ins>"
    elif roll < 0.80:
        k = rng.randrange(1, len(words))
        words.insert(k, f"<del>{rng.choice(('very', 'quite', 'rather'))}</del>")
    else:
        k = rng.randrange(1, len(words))
        words[k] = f"<del>{words[k]}</del><ins>{words[k]} precisely</ins>"
    return " ".join(words)


def generate_aesw_sgml(n_sentences: int = 800, seed: int = DEFAULT_SEED) -> str:
    """SGML document with inline edits: ~10% unedited, ~15% placeholder-bearing,
    the rest edited plain prose (eligible for plaintext sampling)."""
    rng = random.Random(seed)
    n_unedited = n_sentences // 10
    n_placeholder = (15 * n_sentences) // 100
    kinds = (["unedited"] * n_unedited + ["placeholder"] * n_placeholder
             + ["plain"] * (n_sentences - n_unedited - n_placeholder))
    rng.shuffle(kinds)
    lines = ["<corpus>"]
    for i, kind in enumerate(kinds):
        text = _sci_sentence(rng, with_placeholder=(kind == "placeholder"))
        body = _escape(text) if kind == "unedited" else _edit_sentence(rng, _escape(text))
        lines.append(f'<sentence sid="s{i:04d}">{body}.</sentence>')
    lines.append("</corpus>")
    return "\n".join(lines) + "\n"


def write_corpus_file(path, seed: int = DEFAULT_SEED):
    from revjudge.corpus import serialize_pairs

    entries = generate_corpus(seed)
    with open(path, "w", encoding="utf-8") as fh:
        serialize_pairs(entries, fh)
    return len(entries)


def write_aesw_file(path, n_sentences: int = 800, seed: int = DEFAULT_SEED):
    doc = generate_aesw_sgml(n_sentences, seed)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(doc)
    return n_sentences
