"""Paraphrase/back-translation augmentation and the rewriter contract."""

import http.server
import json
import sys
import threading

import pytest

from capqa.augment import (
    AugmentConfig,
    RewriteRequest,
    RewriteResponse,
    augment_batch,
    builtin_rewrite,
)
from capqa.errors import MalformedInput, RewriterUnavailable
from capqa.qa import QAPair


def make_pair(question, answer, qa_id="p0", answer_type="yesno", image_id=1):
    return QAPair(
        qa_id=qa_id,
        image_id=image_id,
        question=question,
        answer=answer,
        answer_type=answer_type,
        source="template",
        source_caption=question,
    )


PARA = AugmentConfig(mode="paraphrase", max_variants=4, seed=0)
BACK = AugmentConfig(mode="backtranslate", pivot_language="es", max_variants=4, seed=0)


# --- builtin rule table ---------------------------------------------------------


def test_builtin_visible_paraphrases():
    out = builtin_rewrite("How many cars are visible?", PARA)
    assert "How many cars are we looking at?" in out
    assert "How many cars can be seen?" in out


def test_builtin_is_there_paraphrase():
    assert "Can you see a dog?" in builtin_rewrite("Is there a dog?", PARA)


def test_builtin_no_matching_rule():
    assert builtin_rewrite("Why?", PARA) == []


def test_builtin_never_echoes_input():
    for q in ("Is there a dog?", "How many cars are visible?", "What is this?"):
        assert q not in builtin_rewrite(q, PARA)


def test_builtin_deterministic_and_capped():
    cfg = AugmentConfig(mode="paraphrase", max_variants=1, seed=3)
    first = builtin_rewrite("How many cars are visible?", cfg)
    second = builtin_rewrite("How many cars are visible?", cfg)
    assert first == second
    assert len(first) == 1


def test_builtin_backtranslation_golden():
    question = "Is the girl who is to the left of the sailboats wearing a backpack?"
    out = builtin_rewrite(question, BACK)
    assert "Does the girl to the left of the sailboats carry a backpack?" in out


# --- request/response invariants -------------------------------------------------


def test_request_requires_pivot_iff_backtranslate():
    RewriteRequest(request_id="r1", text="Is there a dog?", mode="paraphrase")
    RewriteRequest(
        request_id="r2", text="Is there a dog?", mode="backtranslate", pivot_language="fr"
    )
    with pytest.raises(ValueError):
        RewriteRequest(request_id="r3", text="Is there a dog?", mode="backtranslate")
    with pytest.raises(ValueError):
        RewriteRequest(
            request_id="r4", text="Is there a dog?", mode="paraphrase", pivot_language="es"
        )
    with pytest.raises(ValueError):
        RewriteRequest(request_id="r5", text="", mode="paraphrase")
    with pytest.raises(ValueError):
        RewriteRequest(
            request_id="r6", text="x?", mode="backtranslate", pivot_language="xx"
        )


def test_config_validation():
    with pytest.raises(ValueError):
        AugmentConfig(mode="shout")
    with pytest.raises(ValueError):
        AugmentConfig(mode="backtranslate")  # pivot missing
    with pytest.raises(ValueError):
        AugmentConfig(mode="paraphrase", keep_probability=1.5)


# --- augment_batch with the builtin rewriter -------------------------------------


def test_batch_adds_paraphrase_pairs():
    pair = make_pair("How many cars are visible?", "2", answer_type="number")
    out = augment_batch([pair], "builtin", PARA)
    assert out[0] is pair  # original passes through unchanged
    derived = out[1:]
    assert derived
    questions = {p.question for p in derived}
    assert "How many cars are we looking at?" in questions
    for p in derived:
        assert p.answer == "2"
        assert p.answer_type == "number"
        assert p.image_id == 1
        assert p.source == "paraphrase"
        assert p.parent_id == pair.qa_id


def test_batch_output_bound():
    pairs = [
        make_pair("Is there a dog?", "yes", qa_id="a"),
        make_pair("Is there a cat?", "no", qa_id="b"),
    ]
    out = augment_batch(pairs, "builtin", PARA)
    assert len(out) <= len(pairs) * (1 + PARA.max_variants)


def test_batch_empty_rejected():
    with pytest.raises(MalformedInput):
        augment_batch([], "builtin", PARA)


def test_keep_probability_zero_drops_all_variants():
    cfg = AugmentConfig(mode="paraphrase", max_variants=4, keep_probability=0.0)
    pair = make_pair("Is there a dog?", "yes")
    assert augment_batch([pair], "builtin", cfg) == [pair]


def test_batch_deterministic():
    pair = make_pair("Is there a dog?", "yes")
    cfg = AugmentConfig(mode="paraphrase", max_variants=4, keep_probability=0.5, seed=9)
    a = [(p.qa_id, p.question) for p in augment_batch([pair], "builtin", cfg)]
    b = [(p.qa_id, p.question) for p in augment_batch([pair], "builtin", cfg)]
    assert a == b


# --- augment_batch with an in-process rewriter ------------------------------------


def respond_with(texts):
    def rewriter(batch):
        return [RewriteResponse(request_id=r.request_id, rewrites=list(texts)) for r in batch]
    return rewriter


def test_identity_rewrites_dropped():
    pair = make_pair("Is there a dog?", "yes")
    out = augment_batch([pair], respond_with(["Is there a dog?", "is there a  dog?"]), PARA)
    assert out == [pair]


def test_duplicate_rewrites_collapse():
    pair = make_pair("Is there a dog?", "yes")
    out = augment_batch(
        [pair], respond_with(["Can you see a dog?", "can you see a dog?"]), PARA
    )
    assert len(out) == 2


def test_filter_drops_rewrites_losing_the_answer():
    pair = make_pair("Is there a dog?", "dog", answer_type="object")
    out = augment_batch([pair], respond_with(["Can you see it?"]), PARA)
    assert out == [pair]


def test_filter_keeps_answer_consistent_rewrites():
    pair = make_pair("Is there a dog?", "dog", answer_type="object")
    out = augment_batch([pair], respond_with(["Can you see a dog?"]), PARA)
    assert [p.question for p in out[1:]] == ["Can you see a dog?"]


def test_filter_matches_answer_by_head_lemma():
    pair = make_pair("How many puppies are there?", "puppies", answer_type="object")
    out = augment_batch([pair], respond_with(["What is the puppy count?"]), PARA)
    assert len(out) == 2  # "puppy" still mentions the answer's head


# --- subprocess rewriter -----------------------------------------------------------


STUB = """\
import json, sys
for line in sys.stdin:
    line = line.strip()
    if not line:
        continue
    req = json.loads(line)
    text = req["text"]
    rewrites = []
    if text.startswith("Is there"):
        rewrites.append(text.replace("Is there", "Can you see", 1))
    print(json.dumps({"request_id": req["request_id"], "rewrites": rewrites}))
    sys.stdout.flush()
"""


def test_subprocess_rewriter(tmp_path):
    script = tmp_path / "rewriter.py"
    script.write_text(STUB, encoding="utf-8")
    pair = make_pair("Is there a dog?", "yes")
    out = augment_batch([pair], [sys.executable, str(script)], PARA)
    assert [p.question for p in out] == ["Is there a dog?", "Can you see a dog?"]
    assert out[1].source == "paraphrase"


def test_subprocess_missing_binary_is_fatal():
    pair = make_pair("Is there a dog?", "yes")
    with pytest.raises(RewriterUnavailable):
        augment_batch([pair], ["/nonexistent/rewriter-binary"], PARA)


def test_subprocess_failure_falls_back_to_builtin():
    cfg = AugmentConfig(mode="paraphrase", max_variants=4, fallback=True)
    pair = make_pair("Is there a dog?", "yes")
    out = augment_batch([pair], ["/nonexistent/rewriter-binary"], cfg)
    assert "Can you see a dog?" in {p.question for p in out}


def test_subprocess_garbage_output_is_unavailable(tmp_path):
    script = tmp_path / "broken.py"
    script.write_text("print('not json')\n", encoding="utf-8")
    pair = make_pair("Is there a dog?", "yes")
    with pytest.raises(RewriterUnavailable):
        augment_batch([pair], [sys.executable, str(script)], PARA)


# --- HTTP rewriter ------------------------------------------------------------------


class Handler(http.server.BaseHTTPRequestHandler):
    def do_POST(self):
        assert self.path == "/rewrite"
        length = int(self.headers["Content-Length"])
        req = json.loads(self.rfile.read(length))
        rewrites = []
        if req["text"].startswith("Is there"):
            rewrites.append(req["text"].replace("Is there", "Can you see", 1))
        body = json.dumps(
            {"request_id": req["request_id"], "rewrites": rewrites}
        ).encode("utf-8")
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, *args):
        pass


@pytest.fixture()
def http_rewriter():
    server = http.server.ThreadingHTTPServer(("127.0.0.1", 0), Handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_port}/rewrite"
    server.shutdown()


def test_http_rewriter(http_rewriter):
    pair = make_pair("Is there a dog?", "yes")
    out = augment_batch([pair], http_rewriter, PARA)
    assert [p.question for p in out] == ["Is there a dog?", "Can you see a dog?"]


def test_http_unreachable_is_fatal():
    cfg = AugmentConfig(mode="paraphrase", max_variants=2, timeout_s=2.0)
    pair = make_pair("Is there a dog?", "yes")
    with pytest.raises(RewriterUnavailable):
        augment_batch([pair], "http://127.0.0.1:9/rewrite", cfg)


def test_http_unreachable_with_fallback(tmp_path):
    cfg = AugmentConfig(mode="paraphrase", max_variants=4, timeout_s=2.0, fallback=True)
    pair = make_pair("Is there a dog?", "yes")
    out = augment_batch([pair], "http://127.0.0.1:9/rewrite", cfg)
    assert "Can you see a dog?" in {p.question for p in out}
