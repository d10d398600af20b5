#!/usr/bin/env python3
"""Generates the synthetic test fixtures under tests/fixtures/.

mini_dump/    ~200 questions and ~1000 answers in the Stack Exchange dump
              layout. Answer votes depend on the author's reputation, code,
              links, length and a few wording cues, plus noise.
posts_1000.xml  1000 valid post rows, plus rows that must be skipped, exercising the awkward corners of the format
              (entities, encoded newlines, non-ASCII text, unknown and missing
              attributes, rows that must be skipped).

Output is a pure function of the seed.
"""

import argparse
import math
import pathlib
import random
from xml.sax.saxutils import quoteattr

TOPICS = {
    "npe": ("NullPointerException when calling a method on a list in Java",
            ["java", "null", "pointer", "exception", "list", "object", "method", "initialize"]),
    "segfault": ("Segmentation fault when iterating a vector in C++",
                 ["segmentation", "fault", "vector", "iterator", "pointer", "memory", "index", "bounds"]),
    "import": ("ImportError: no module named requests in Python",
               ["python", "import", "module", "package", "pip", "virtualenv", "path", "install"]),
    "cors": ("CORS request blocked when calling an API from JavaScript",
             ["cors", "request", "header", "origin", "browser", "server", "fetch", "api"]),
    "sql": ("SQL query returns duplicate rows after a join",
            ["sql", "join", "duplicate", "rows", "select", "distinct", "table", "query"]),
    "git": ("Git merge conflict after rebasing a feature branch",
            ["git", "merge", "conflict", "rebase", "branch", "commit", "history", "remote"]),
    "react": ("React component does not re-render after state update",
              ["react", "state", "render", "component", "hook", "props", "update", "effect"]),
    "docker": ("Docker container exits immediately after start",
               ["docker", "container", "image", "entrypoint", "command", "process", "exit", "log"]),
    "regex": ("Regular expression does not match across multiple lines",
              ["regex", "pattern", "match", "multiline", "flag", "string", "group", "anchor"]),
    "date": ("Parsing a date string with a timezone offset fails",
             ["date", "parse", "timezone", "format", "string", "offset", "locale", "time"]),
    "thread": ("Deadlock between two threads waiting on a mutex",
               ["thread", "deadlock", "mutex", "lock", "wait", "condition", "race", "order"]),
    "css": ("CSS flexbox items overflow their container",
            ["css", "flexbox", "overflow", "container", "width", "wrap", "item", "layout"]),
}

FILLER = ["the", "this", "when", "after", "with", "it", "my", "a", "is", "and", "but", "to", "in",
          "i", "have", "tried", "some", "still", "get", "same", "error", "code", "running"]
GOOD_CUES = ["because", "documentation", "explanation", "reason", "specifically", "guarantees",
             "underlying", "correctly"]
WEAK_CUES = ["maybe", "guess", "try", "dunno", "somehow", "whatever"]
CODE = {
    "npe": "List<String> items = new ArrayList<>();\nitems.add(name);",
    "segfault": "for (auto it = v.begin(); it != v.end(); ++it) {\n  use(*it);\n}",
    "import": "python -m pip install requests\nimport requests",
    "cors": "res.setHeader('Access-Control-Allow-Origin', '*');",
    "sql": "SELECT DISTINCT a.id, a.name\nFROM a JOIN b ON b.a_id = a.id;",
    "git": "git rebase --continue\ngit push --force-with-lease",
    "react": "const [items, setItems] = useState([]);\nsetItems([...items, x]);",
    "docker": "CMD [\"node\", \"server.js\"]",
    "regex": "re.compile(r'^foo.*bar$', re.MULTILINE | re.DOTALL)",
    "date": "LocalDateTime.parse(s, DateTimeFormatter.ISO_OFFSET_DATE_TIME);",
    "thread": "std::scoped_lock lock(a, b);",
    "css": ".item { flex: 1 1 0; min-width: 0; }",
}


def ts(rng, year_lo=2012, year_hi=2019):
    return "%04d-%02d-%02dT%02d:%02d:%02d.%03d" % (
        rng.randint(year_lo, year_hi), rng.randint(1, 12), rng.randint(1, 28),
        rng.randint(0, 23), rng.randint(0, 59), rng.randint(0, 59), rng.randint(0, 999))


def row(attrs):
    parts = []
    for k, v in attrs:
        if v is None:
            continue
        parts.append("%s=%s" % (k, quoteattr(str(v), {"\n": "&#xA;", "\r": "&#xD;", "\t": "&#x9;"})))
    return "  <row " + " ".join(parts) + " />"


def write_xml(path, root, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write('<?xml version="1.0" encoding="utf-8"?>\n<%s>\n' % root)
        for r in rows:
            f.write(r + "\n")
        f.write("</%s>\n" % root)


def sentence(rng, words, n):
    return " ".join(rng.choice(words) for _ in range(n)).capitalize() + "."


def mini_dump(out_dir, seed):
    rng = random.Random(seed)
    out_dir.mkdir(parents=True, exist_ok=True)
    n_users = 160
    users = []
    for uid in range(1, n_users + 1):
        rep = int(math.exp(rng.gauss(5.5, 1.8)))
        users.append((uid, max(1, rep)))
    user_rows = [row([("Id", uid), ("Reputation", rep), ("CreationDate", ts(rng, 2008, 2012)),
                      ("DisplayName", "user%d" % uid), ("Views", rng.randint(0, 500))])
                 for uid, rep in users]
    rep_of = dict(users)
    askers = [uid for uid, _ in users[:110]]

    post_rows, comment_rows = [], []
    next_id, comment_id = 1000, 1
    topics = list(TOPICS)
    for qn in range(200):
        topic = topics[qn % len(topics)]
        title, words = TOPICS[topic]
        qid = next_id
        next_id += 1
        n_answers = max(1, min(12, int(round(rng.gauss(5, 2.2)))))
        if qn % 25 == 7:
            n_answers = 0
        body = "<p>%s %s</p>" % (sentence(rng, words + FILLER, rng.randint(8, 16)),
                                 sentence(rng, words + FILLER, rng.randint(6, 12)))
        if rng.random() < 0.6:
            body += "<pre><code>%s</code></pre>" % CODE[topic].replace("<", "&lt;").replace(">", "&gt;")
        owner = None if qn % 40 == 13 else rng.choice(askers)
        answer_ids = list(range(next_id, next_id + n_answers))
        next_id += n_answers
        post_rows.append(row([
            ("Id", qid), ("PostTypeId", 1),
            ("AcceptedAnswerId", answer_ids[0] if answer_ids and rng.random() < 0.5 else None),
            ("CreationDate", ts(rng)), ("Score", rng.randint(-2, 40)),
            ("ViewCount", rng.randint(10, 50000)), ("Body", body), ("OwnerUserId", owner),
            ("Title", "%s (%d)" % (title, qn)), ("Tags", "<%s>" % topic),
            ("AnswerCount", n_answers), ("CommentCount", rng.randint(0, 3)),
            ("FavoriteCount", rng.randint(0, 5) if rng.random() < 0.5 else None)]))
        for aid in answer_ids:
            author = rng.randint(1, n_users)
            rep = rep_of[author]
            has_code = rng.random() < 0.55
            has_link = rng.random() < 0.3
            good = rng.randint(0, 3)
            weak = rng.randint(0, 2)
            paragraphs = rng.randint(1, 4)
            text = []
            for p in range(paragraphs):
                words_p = words + FILLER
                s = sentence(rng, words_p, rng.randint(6, 18))
                if p == 0 and good:
                    s += " " + " ".join(rng.sample(GOOD_CUES, good)).capitalize() + "."
                if p == paragraphs - 1 and weak:
                    s += " " + " ".join(rng.sample(WEAK_CUES, weak)).capitalize() + "."
                text.append("<p>%s</p>" % s)
            if has_code:
                text.insert(1, "<pre><code>%s</code></pre>" %
                            CODE[topic].replace("<", "&lt;").replace(">", "&gt;"))
            if has_link:
                text.append('<p>See <a href="https://docs.example.org/%s">the docs</a>.</p>' % topic)
            quality = (0.9 * math.log1p(rep) + 2.0 * has_code + 1.0 * has_link + 1.2 * good
                       - 1.0 * weak + 0.5 * paragraphs + rng.gauss(0, 1.0))
            score = int(round(2.5 * quality - 8))
            post_rows.append(row([
                ("Id", aid), ("PostTypeId", 2), ("ParentId", qid), ("CreationDate", ts(rng)),
                ("Score", score), ("Body", "".join(text)), ("OwnerUserId", author),
                ("CommentCount", rng.randint(0, 2))]))
            if rng.random() < 0.3:
                comment_rows.append(row([("Id", comment_id), ("PostId", aid),
                                         ("Score", rng.randint(0, 4)),
                                         ("Text", "Thanks, this fixed it."),
                                         ("CreationDate", ts(rng)),
                                         ("UserId", rng.randint(1, n_users))]))
                comment_id += 1

    write_xml(out_dir / "Posts.xml", "posts", post_rows)
    write_xml(out_dir / "Users.xml", "users", user_rows)
    write_xml(out_dir / "Comments.xml", "comments", comment_rows)


def tricky_posts(path, seed):
    rng = random.Random(seed)
    snippets = [
        "<p>Use <code>a &lt; b &amp;&amp; c</code> here</p>",
        "<p>Line one\nLine two\r\nwith\ttab</p>",
        "<p>café naïve 日本語 \U0001F600 emoji</p>",
        "<p>Quote \"double\" and 'single'</p>",
        "<pre>bare pre block\n  indented</pre>",
        "<p>email me: someone@example.com, see http://example.org/x?a=1&b=2</p>",
        "",
    ]
    rows = []
    for i in range(1000):
        pid = 2 * i + 1
        kind = i % 10
        attrs = [("Id", pid)]
        if kind < 6:
            attrs.append(("PostTypeId", 1))
        else:
            attrs.append(("PostTypeId", 2))
            attrs.append(("ParentId", max(1, pid - 2 * rng.randint(1, 6))))
        attrs.append(("CreationDate", ts(rng)))
        attrs.append(("Score", rng.randint(-5, 500)))
        if rng.random() < 0.7:
            attrs.append(("ViewCount", rng.randint(0, 10 ** 6)))
        attrs.append(("Body", rng.choice(snippets)))
        if rng.random() < 0.85:
            attrs.append(("OwnerUserId", rng.randint(-1, 5000)))
        if kind < 6:
            attrs.append(("Title", "Question %d: %s" % (pid, rng.choice(["a < b", "x & y", "über", "plain"]))))
            attrs.append(("Tags", "<c++><templates>"))
            attrs.append(("AnswerCount", rng.randint(0, 9)))
        if rng.random() < 0.5:
            attrs.append(("CommentCount", rng.randint(0, 20)))
        if rng.random() < 0.2:
            attrs.append(("FavoriteCount", rng.randint(0, 20)))
        if rng.random() < 0.3:
            attrs.append(("LastEditorDisplayName", "someone"))  # not modelled
        rows.append(row(attrs))
        # Rows that must be skipped and tallied, interleaved with the valid ones.
        if i % 40 == 17:
            rows.append(row([("Id", pid + 1), ("PostTypeId", 5), ("Body", "wiki excerpt"),
                             ("CreationDate", ts(rng)), ("Score", 0)]))
        if i % 250 == 99:
            rows.append(row([("PostTypeId", 1), ("Body", "no id"), ("Score", 1)]))
        if i % 333 == 5:
            rows.append(row([("Id", pid + 1), ("PostTypeId", 2), ("Body", "orphan without parent"),
                             ("Score", 1)]))
    write_xml(path, "posts", rows)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "tests" / "fixtures"))
    ap.add_argument("--seed", type=int, default=20190601)
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    mini_dump(out / "mini_dump", args.seed)
    tricky_posts(out / "posts_1000.xml", args.seed + 1)


if __name__ == "__main__":
    main()
