"""Template question generation.

Five generators build Q-A pairs from one analyzed caption (yes/no, object,
number, color, location), and two transforms derive hard negatives from an
existing pair (negation, adversarial object substitution). Every random
choice draws from a stream keyed on (seed, image_id, caption_index,
generator), so output is reproducible pair by pair and images never
influence one another.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass

from . import lingo
from . import wordlists as wl
from .embed import EmbeddingStore, nearest
from .errors import Unsupported, ZeroVector
from .lingo import ADP, AUX, NOUN, OTHER, PROPN, VERB, Lexicons
from .qa import QAPair, derived_qa_id, make_qa_id
from .rng import stream

_DEFAULT_PREFIXES = ("is there", "is this", "is the", "are there")
_NEGATIVE_MODES = ("auto", "negation", "adversarial")

_ARTICLES = ("a", "an", "the")
_DEMONSTRATIVES = ("this", "these", "that", "those")

# vowel/consonant agreement after an object word was swapped in
_ART_A = re.compile(r"\b(a) (?=[aeiou])")
_ART_AN = re.compile(r"\b(an) (?=[b-df-hj-np-tv-z])")

_COLOR_Q = re.compile(r"^What is the color of (.+)\?$")

_LONG_QUESTION = 14


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    yesno_prefixes: tuple = _DEFAULT_PREFIXES
    adversarial_threshold: float = 0.4
    max_questions_per_caption: int = 20
    negative_mode: str = "auto"

    def __post_init__(self):
        object.__setattr__(self, "yesno_prefixes", tuple(self.yesno_prefixes))
        if not self.yesno_prefixes:
            raise ValueError("yesno_prefixes must be non-empty")
        if not 0.0 <= self.adversarial_threshold <= 1.0:
            raise ValueError("adversarial_threshold must lie in [0, 1]")
        if self.max_questions_per_caption < 1:
            raise ValueError("max_questions_per_caption must be at least 1")
        if self.negative_mode not in _NEGATIVE_MODES:
            raise ValueError(f"negative_mode must be one of {_NEGATIVE_MODES}")


# --- assembly helpers ---------------------------------------------------------


def _fix_articles(text: str) -> str:
    text = _ART_A.sub(lambda m: m.group(1) + "n ", text)
    return _ART_AN.sub(lambda m: m.group(1)[:1] + " ", text)


def _finish(parts) -> str:
    """Join parts, squeeze whitespace, drop trailing punctuation, add "?"."""
    text = re.sub(r"\s+", " ", " ".join(p for p in parts if p)).strip()
    text = text.rstrip(" .,;:!")
    text = _fix_articles(text)
    if not text:
        return "?"
    return text[0].upper() + text[1:] + "?"


def _word(token) -> str:
    return token.text if token.pos == PROPN else token.text.lower()


def _words(tokens) -> str:
    """Lowercased detokenization (proper nouns keep their case)."""
    parts = []
    for t in tokens:
        w = _word(t)
        if parts and t.pos == OTHER and not any(ch.isalnum() for ch in t.text):
            parts[-1] += w
        else:
            parts.append(w)
    return " ".join(parts)


def _tok_index(tokens, tok) -> int:
    for i, t in enumerate(tokens):
        if t is tok:
            return i
    raise ValueError("token not part of this analysis")


def _is_plural(token) -> bool:
    return token.lemma != token.text.lower()


def _be(plural: bool) -> str:
    return "are" if plural else "is"


def _subject_np(tokens, nps):
    """First noun phrase not governed by a preposition, with its start index."""
    for np_ in nps:
        idx = _tok_index(tokens, np_.tokens[0])
        if idx == 0 or tokens[idx - 1].pos != ADP:
            return np_, idx
    return None, -1


def _definite_phrase(tokens, determiner) -> str:
    """Render a subject span with a definite article supplied or substituted."""
    words = [_word(t) for t in tokens]
    if determiner is None:
        return "the " + " ".join(words)
    if determiner.text.lower() in ("a", "an"):
        words[0] = "the"
    return " ".join(words)


def _shorten(question: str) -> str:
    """Questions past the length cap are cut at the first conjunction."""
    words = question[:-1].split(" ")
    if len(words) <= _LONG_QUESTION:
        return question
    for i, w in enumerate(words):
        if i > 0 and w.lower() in wl.CONJUNCTIONS:
            return _finish([" ".join(words[:i])])
    return question


def _pair(record, caption_index, generator, ordinal, question, answer, answer_type):
    return QAPair(
        qa_id=make_qa_id(record.image_id, caption_index, generator, ordinal),
        image_id=record.image_id,
        question=question,
        answer=answer,
        answer_type=answer_type,
        source="template",
        source_caption=record.captions[caption_index],
    )


# --- yes/no -------------------------------------------------------------------


def _agree_prefix(prefix: str, plural: bool) -> str:
    words = prefix.split(" ")
    if words[0] in ("is", "are"):
        words[0] = _be(plural)
    if len(words) > 1 and words[1] in ("this", "these"):
        words[1] = "these" if plural else "this"
    return " ".join(words)


def gen_yesno(record, caption_index, analysis, store, cfg, *, lex=None,
              object_vocab=None, record_lemmas=None):
    """One affirmed question plus exactly one paired negative per caption."""
    lex = lex or Lexicons.default()
    tokens, nps = analysis
    if not nps:
        return []
    rng = stream(cfg.seed, record.image_id, caption_index, "yesno")
    subject, _ = _subject_np(tokens, nps)
    if subject is None:
        subject = nps[0]
    prefix = _agree_prefix(rng.choice(list(cfg.yesno_prefixes)), _is_plural(subject.head))

    body_words = lingo.strip_aux(tokens, lex).split(" ")
    if prefix.endswith("the") and body_words and body_words[0].lower() in _ARTICLES:
        body_words = body_words[1:]
    if body_words and body_words[0]:
        first = body_words[0]
        if not any(t.pos == PROPN and t.text == first for t in tokens):
            body_words[0] = first[0].lower() + first[1:]

    yes = _pair(
        record, caption_index, "yesno", 0,
        _finish([prefix, " ".join(body_words)]), "yes", "yesno",
    )

    mode = cfg.negative_mode
    if mode == "auto":
        use_adv = rng.random() < 0.5 and store is not None
        mode = "adversarial" if use_adv else "negation"
    neg = None
    if mode == "adversarial" and store is not None:
        vocab = object_vocab if object_vocab is not None else set(store.vocab_order)
        neg = adversarial_qa(
            yes, analysis, record, store, vocab, cfg,
            lex=lex, record_lemmas=record_lemmas,
        )
    if neg is None:
        neg = negate_qa(yes, analysis, lex, cfg)
    return [yes, neg]


# --- object -------------------------------------------------------------------


def _np_answer(np_) -> str:
    if np_.quantifier is not None or np_.color is not None:
        return np_.text_sans_determiner.lower()
    return np_.head.text.lower()


def _object_eligible(np_, lex) -> bool:
    if np_.head.lemma in wl.RELATIONAL_NOUNS:
        return False
    det = np_.determiner
    if det is not None and det.text.lower() in wl.POSSESSIVE_DETERMINERS:
        return False
    return True


def gen_object(record, analysis, cfg, *, caption_index=0, lex=None):
    """Replace noun phrases with "what"; the removed phrase is the answer."""
    lex = lex or Lexicons.default()
    tokens, nps = analysis
    pairs = []
    subject, subj_idx = _subject_np(tokens, nps)

    def emit(question, answer):
        pairs.append(
            _pair(record, caption_index, "object", len(pairs),
                  _shorten(question), answer, "object")
        )

    if len(nps) == 1 and all(
        any(t is u for u in nps[0].tokens) or not any(ch.isalnum() for ch in t.text)
        for t in tokens
    ):
        np_ = nps[0]
        if _object_eligible(np_, lex):
            question = "What are these?" if _is_plural(np_.head) else "What is this?"
            emit(question, _np_answer(np_))
        return pairs

    subj_plural = subject is not None and _is_plural(subject.head)
    for np_ in nps:
        if not _object_eligible(np_, lex):
            continue
        is_subject = np_ is subject
        if is_subject:
            if np_.head.lemma not in lex.persons:
                end = _tok_index(tokens, np_.tokens[-1]) + 1
                rest = tokens[end:]
                if rest and not (rest[0].pos == OTHER and rest[0].text.lower() in wl.CONJUNCTIONS):
                    parts = ["what"]
                    if rest[0].pos != AUX:
                        parts.append(_be(_is_plural(np_.head)))
                    parts.append(_words(rest))
                    emit(_finish(parts), _np_answer(np_))
            # sentence-initial compound: the first noun alone is questionable
            nouns = [t for t in np_.tokens if t.pos in (NOUN, PROPN)]
            if subj_idx == 0 and len(nouns) >= 2:
                first = nouns[0]
                if first.lemma not in lex.persons and first.lemma not in wl.RELATIONAL_NOUNS:
                    after = tokens[_tok_index(tokens, first) + 1:]
                    emit(_finish(["what", _words(after)]), first.text.lower())
        elif subject is not None:
            subj_end = _tok_index(tokens, subject.tokens[-1]) + 1
            target_ids = {id(t) for t in np_.tokens}
            aux_tok = next((t for t in tokens if t.pos == AUX), None)
            remainder = [
                t for t in tokens[subj_end:]
                if id(t) not in target_ids and t is not aux_tok
            ]
            aux = aux_tok.text.lower() if aux_tok is not None else _be(subj_plural)
            emit(
                _finish([
                    "what", aux,
                    _definite_phrase(subject.tokens, subject.determiner),
                    _words(remainder),
                ]),
                _np_answer(np_),
            )
    return pairs


# --- number -------------------------------------------------------------------


def gen_number(record, analysis, cfg, *, caption_index=0, lex=None):
    """A counting question per numerically quantified noun phrase."""
    lex = lex or Lexicons.default()
    tokens, nps = analysis
    rng = stream(cfg.seed, record.image_id, caption_index, "number")
    pairs = []
    for np_ in nps:
        quant = np_.quantifier
        if quant is None:
            continue
        word = quant.text.lower()
        digit = lex.number_words.get(word, word if word.isdigit() else None)
        if digit is None:
            continue  # vague quantifier, not countable
        how_many = rng.random() < 0.5

        rest_tokens = [t for t in np_.tokens if t is not np_.determiner and t is not quant]
        rest_words = [_word(t) for t in rest_tokens]
        if not _is_plural(np_.head):
            rest_words[-1] = lingo.pluralize(rest_words[-1])
        rest = " ".join(rest_words)

        post = []
        for t in tokens[_tok_index(tokens, np_.tokens[-1]) + 1:]:
            if t.text.lower() in wl.CONJUNCTIONS:
                break
            post.append(t)
        content = [t for t in post if any(ch.isalnum() for ch in t.text)]

        if how_many:
            if not content:
                body = f"how many {rest} are there"
            elif len(content) == 1 and content[0].pos == VERB:
                body = f"how many {rest} are {_words(post)}"
            else:
                body = f"how many {rest} {_words(post)}"
        else:
            tail = _words(post) if content else ""
            body = f"what is the count of {rest} {tail}"
        pairs.append(
            _pair(record, caption_index, "number", len(pairs), _finish([body]), digit, "number")
        )
    return pairs


# --- color --------------------------------------------------------------------


def gen_color(record, analysis, cfg, *, caption_index=0, lex=None):
    tokens, nps = analysis
    pairs = []
    for np_ in nps:
        if np_.color is None:
            continue
        obj = _words([t for t in np_.tokens if t is not np_.determiner and t is not np_.color])
        pairs.append(
            _pair(
                record, caption_index, "color", len(pairs),
                _finish([f"what is the color of the {obj}"]),
                np_.color.text.lower(), "color",
            )
        )
    return pairs


# --- location -----------------------------------------------------------------


def gen_location(record, analysis, lex, cfg, *, caption_index=0):
    tokens, nps = analysis
    subject, subj_idx = _subject_np(tokens, nps)
    start_of = {id(np_.tokens[0]): np_ for np_ in nps}
    pairs = []
    for i in range(len(tokens) - 1):
        t = tokens[i]
        if t.pos != ADP or t.text.lower() not in ("in", "within"):
            continue
        loc = start_of.get(id(tokens[i + 1]))
        if loc is None or loc.head.lemma not in lex.locations:
            continue
        if subject is None or loc is subject:
            continue
        be = _be(_is_plural(subject.head))
        prev = tokens[i - 1] if i > 0 else None
        if prev is not None and prev.pos == VERB:
            topic = _definite_phrase(subject.tokens, subject.determiner)
            body = f"where {be} {topic} {prev.text.lower()}"
        else:
            span = tokens[subj_idx:i]
            body = f"where {be} {_definite_phrase(span, subject.determiner)}"
        pairs.append(
            _pair(
                record, caption_index, "location", len(pairs),
                _finish([body]), _words(loc.tokens), "location",
            )
        )
    return pairs


# --- negation -----------------------------------------------------------------


def _splice(tokens, replace_at=None, replace_with=None, insert_at=None, insert_word=None):
    parts = []
    for i, t in enumerate(tokens):
        if insert_at == i:
            parts.append(insert_word)
        text = replace_with if replace_at == i else t.text
        if parts and t.pos == OTHER and not any(ch.isalnum() for ch in t.text):
            parts[-1] += text
        else:
            parts.append(text)
    if insert_at == len(tokens):
        parts.append(insert_word)
    return " ".join(parts)


def _negate_yesno_question(question: str, lex: Lexicons) -> str:
    tokens, nps = lingo.analyze(question, lex)
    low = [t.text.lower() for t in tokens]
    if len(tokens) >= 2 and low[1] == "there":
        if len(tokens) >= 3 and low[2] in _ARTICLES:
            return _splice(tokens, replace_at=2, replace_with="no")
        return _splice(tokens, insert_at=2, insert_word="no")
    if len(tokens) >= 2 and low[1] in _DEMONSTRATIVES:
        return _splice(tokens, insert_at=2, insert_word="not")
    if nps:
        after_subject = _tok_index(tokens, nps[0].tokens[-1]) + 1
        return _splice(tokens, insert_at=after_subject, insert_word="not")
    return _splice(tokens, insert_at=1, insert_word="not")


def negate_qa(qa: QAPair, analysis, lex: Lexicons, cfg: GenConfig) -> QAPair:
    """Negated twin of a yes/no or color pair, with the answer flipped."""
    if qa.answer_type == "yesno":
        question = _negate_yesno_question(qa.question, lex)
        answer = "no" if qa.answer == "yes" else "yes"
    elif qa.answer_type == "color":
        m = _COLOR_Q.match(qa.question)
        if m is None:
            raise Unsupported(f"cannot negate color question {qa.question!r}")
        question = f"What is not the color of {m.group(1)}?"
        original = qa.answer.lower()
        antonym = lex.antonyms.get(original)
        if antonym in lex.colors:
            answer = antonym
        else:
            others = sorted(lex.colors - {original})
            if not others:
                raise Unsupported("no alternative color available")
            answer = stream(cfg.seed, qa.qa_id, "negate-color").choice(others)
    else:
        raise Unsupported(f"cannot negate answer type {qa.answer_type!r}")
    return QAPair(
        qa_id=derived_qa_id(qa.image_id, qa.qa_id, "negation", 0),
        image_id=qa.image_id,
        question=question,
        answer=answer,
        answer_type=qa.answer_type,
        source="negation",
        source_caption=qa.source_caption,
        parent_id=qa.qa_id,
    )


# --- adversarial substitution ---------------------------------------------------


def _question_answer_remap(qa: QAPair):
    if qa.answer_type == "yesno":
        return "no"
    if qa.answer_type == "number":
        return "none"
    if qa.answer_type == "object":
        return "can't say"
    if qa.answer_type == "phrase" and qa.question.split(" ")[0].lower() in ("who", "what"):
        return "can't say"
    return None


def adversarial_qa(qa: QAPair, analysis, record, store: EmbeddingStore,
                   object_vocab, cfg: GenConfig, *, lex=None, record_lemmas=None):
    """Swap one mentioned object for a near neighbour absent from the image.

    Returns None when the question names no storable object, no candidate
    clears the similarity threshold, or the answer type has no remap.
    """
    answer = _question_answer_remap(qa)
    if answer is None:
        return None
    lex = lex or Lexicons.default()
    tokens, nps = analysis

    if record_lemmas is None:
        lemmas = set()
        for caption in record.captions:
            _, caption_nps = lingo.analyze(caption, lex)
            lemmas.update(np_.head.lemma for np_ in caption_nps)
    else:
        lemmas = set(record_lemmas)

    q_lower = qa.question.lower()
    target = None
    for np_ in nps:
        surface = np_.head.text.lower()
        word = surface if surface in store.vectors else np_.head.lemma
        if word in store.vectors and re.search(rf"\b{re.escape(surface)}\b", q_lower):
            target = (surface, word)
            break
    if target is None:
        return None
    surface, word = target

    def absent(candidate: str) -> bool:
        return all(lingo.singularize(w) not in lemmas for w in candidate.split(" "))

    candidates = {c for c in object_vocab if absent(c)}
    try:
        hits = nearest(word, store, candidates, exclude=lemmas | {surface, word})
    except ZeroVector:
        return None
    if not hits or hits[0][1] < cfg.adversarial_threshold:
        return None
    substitute = hits[0][0]
    if lingo.singularize(surface) != surface:
        parts = substitute.split(" ")
        parts[-1] = lingo.pluralize(parts[-1])
        substitute = " ".join(parts)

    question = re.sub(
        rf"\b{re.escape(surface)}\b", substitute, qa.question, count=1, flags=re.IGNORECASE
    )
    return QAPair(
        qa_id=derived_qa_id(qa.image_id, qa.qa_id, "adversarial", 0),
        image_id=qa.image_id,
        question=_fix_articles(question),
        answer=answer,
        answer_type=qa.answer_type,
        source="adversarial",
        source_caption=qa.source_caption,
        parent_id=qa.qa_id,
    )


def build_object_vocab(counts: Counter, limit: int = 5000) -> set:
    """The most frequent noun-phrase head lemmas, ties broken alphabetically."""
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return {word for word, _ in ranked[:limit]}
