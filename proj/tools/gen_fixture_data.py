#!/usr/bin/env python3
"""Regenerates the toy resource files under data/.

The lexicon glosses and embedding keys are Porter stems of the English
surface forms used in the bench phrases, so a caption pair planted from one
phrase-table row embeds to identical vectors on both sides. Deterministic:
fixed seeds, sorted output.
"""

import math
import random
import zlib


def stable_hash(s):
    return zlib.crc32(s.encode())
from pathlib import Path

DATA = Path(__file__).resolve().parent.parent / "data"


# --- Porter stemmer (1980 rule set), mirrors include/subalign/porter.hpp ----

def _cons(b, i):
    c = b[i]
    if c in "aeiou":
        return False
    if c == "y":
        return True if i == 0 else not _cons(b, i - 1)
    return True


def _m(b, j):
    n = 0
    i = 0
    while True:
        if i > j:
            return n
        if not _cons(b, i):
            break
        i += 1
    i += 1
    while True:
        while True:
            if i > j:
                return n
            if _cons(b, i):
                break
            i += 1
        i += 1
        n += 1
        while True:
            if i > j:
                return n
            if not _cons(b, i):
                break
            i += 1
        i += 1


def _vowelinstem(b, j):
    return any(not _cons(b, i) for i in range(j + 1))


def _doublec(b, j):
    return j >= 1 and b[j] == b[j - 1] and _cons(b, j)


def _cvc(b, i):
    if i < 2 or not _cons(b, i) or _cons(b, i - 1) or not _cons(b, i - 2):
        return False
    return b[i] not in "wxy"


def porter(word):
    if len(word) <= 2:
        return word
    b = list(word)
    k = len(b) - 1
    j = [0]

    def ends(s):
        n = len(s)
        if n > k + 1 or "".join(b[k - n + 1 : k + 1]) != s:
            return False
        j[0] = k - n
        return True

    def setto(s):
        nonlocal k
        b[j[0] + 1 : k + 1] = list(s)
        k = j[0] + len(s)

    def r(s):
        if _m(b, j[0]) > 0:
            setto(s)

    # step 1ab
    if b[k] == "s":
        if ends("sses"):
            k -= 2
        elif ends("ies"):
            setto("i")
        elif b[k - 1] != "s":
            k -= 1
    if ends("eed"):
        if _m(b, j[0]) > 0:
            k -= 1
    elif (ends("ed") or ends("ing")) and _vowelinstem(b, j[0]):
        k = j[0]
        if ends("at"):
            setto("ate")
        elif ends("bl"):
            setto("ble")
        elif ends("iz"):
            setto("ize")
        elif _doublec(b, k):
            k -= 1
            if b[k] in "lsz":
                k += 1
        elif _m(b, k) == 1 and _cvc(b, k):
            setto("e")
    # step 1c
    if ends("y") and _vowelinstem(b, j[0]):
        b[k] = "i"
    # step 2
    pairs2 = [("ational", "ate"), ("tional", "tion"), ("enci", "ence"), ("anci", "ance"),
              ("izer", "ize"), ("abli", "able"), ("alli", "al"), ("entli", "ent"),
              ("eli", "e"), ("ousli", "ous"), ("ization", "ize"), ("ation", "ate"),
              ("ator", "ate"), ("alism", "al"), ("iveness", "ive"), ("fulness", "ful"),
              ("ousness", "ous"), ("aliti", "al"), ("iviti", "ive"), ("biliti", "ble")]
    best = max((s for s, _ in pairs2 if ends(s)), key=len, default=None)
    if best:
        ends(best)
        r(dict(pairs2)[best])
    # step 3
    pairs3 = [("icate", "ic"), ("ative", ""), ("alize", "al"), ("iciti", "ic"),
              ("ical", "ic"), ("ful", ""), ("ness", "")]
    best = max((s for s, _ in pairs3 if ends(s)), key=len, default=None)
    if best:
        ends(best)
        r(dict(pairs3)[best])
    # step 4
    for s in ["ement", "ance", "ence", "able", "ible", "ment", "ant", "ent", "ism",
              "ate", "iti", "ous", "ive", "ize", "ion", "al", "er", "ic", "ou"]:
        if ends(s):
            if s == "ion" and not (j[0] >= 0 and b[j[0]] in "st"):
                break
            if _m(b, j[0]) > 1:
                k = j[0]
            break
    # step 5
    j[0] = k
    if b[k] == "e":
        a = _m(b, k)
        if a > 1 or (a == 1 and not _cvc(b, k - 1)):
            k -= 1
    if b[k] == "l" and _doublec(b, k) and _m(b, k) > 1:
        k -= 1
    return "".join(b[: k + 1])


# --- vocabulary ---------------------------------------------------------------

# (japanese, english surface used in phrases). Gloss = porter(surface).
LEXICON = [
    ("猫", "cat"), ("犬", "dog"), ("魚", "fish"), ("鳥", "bird"), ("水", "water"),
    ("食べる", "eats"), ("飲む", "drinks"), ("走る", "runs"), ("歩く", "walks"),
    ("見る", "sees"), ("話す", "talks"), ("聞く", "hears"), ("読む", "reads"),
    ("書く", "writes"), ("買う", "buys"), ("売る", "sells"), ("眠る", "sleeps"),
    ("笑う", "laughs"), ("歌う", "sings"), ("待つ", "waits"), ("作る", "makes"),
    ("大きい", "big"), ("小さい", "small"), ("赤い", "red"), ("青い", "blue"),
    ("白い", "white"), ("黒い", "black"), ("速い", "fast"), ("遅い", "slow"),
    ("新しい", "new"), ("古い", "old"), ("静か", "quiet"), ("強い", "strong"),
    ("家", "house"), ("学校", "school"), ("先生", "teacher"), ("友達", "friend"),
    ("本", "book"), ("車", "car"), ("電車", "train"), ("空", "sky"), ("海", "sea"),
    ("山", "mountain"), ("川", "river"), ("雨", "rain"), ("雪", "snow"),
    ("風", "wind"), ("朝", "morning"), ("夜", "night"), ("今日", "today"),
    ("明日", "tomorrow"), ("時間", "time"), ("お金", "money"), ("音楽", "music"),
    ("映画", "movie"), ("写真", "photo"), ("野菜", "vegetable"), ("果物", "fruit"),
    ("パン", "bread"), ("牛乳", "milk"), ("コーヒー", "coffee"), ("紅茶", "tea"),
    ("卵", "egg"), ("肉", "meat"), ("米", "rice"), ("庭", "garden"),
    ("窓", "window"), ("扉", "door"), ("道", "road"), ("街", "town"), ("星", "stars"),
]

STOPWORDS = """a about after again all am an and any are as at be been being but by
can could d did do does doing don down during each few for from had has have having
he her here hers him his how i if in into is it its just ll m me more most my no
nor not now of off on once only or other our ours out over own re s same she so
some such t than that the their theirs them then there these they this those
through to too under until up ve very was we were what when where which while who
whom why will with would you your yours""".split()

PARTICLES = """は が を に へ で と や も の か ね よ ぞ ぜ わ さ から まで より だ です
ます ました でした する した して いる ある ない なかった れる られる など って ちゃ じゃ
た て な けど でも だけ ここ それ これ あれ この その""".split()

# Candidate pool for misspelling targets. The final set is filtered so that
# any two targets are far apart in edit space: a one-edit typo then has a
# unique plausible source, which is what makes the toy corrector decidable.
MISSPELL_CANDIDATES = [
    "the", "beautiful", "tomorrow", "window", "school", "friend", "mountain",
    "coffee", "strong", "believe", "morning", "people", "because", "little",
    "always", "listen", "garden", "teacher", "water", "night", "money",
    "music", "heart", "world", "happy", "really", "please", "thank", "sorry",
    "speak", "dance", "dream", "smile", "think", "right", "never", "again",
    "about", "would", "could", "house", "train", "bread", "what", "there",
    "remember", "together", "important", "different", "chocolate", "umbrella",
    "adventure", "butterfly", "telephone", "yesterday", "wonderful", "stranger",
    "whisper", "thunder", "blanket", "library", "kitchen", "picture",
    "history", "holiday", "elephant", "hospital", "magazine", "universe",
]


def osa_distance(a, b):
    # optimal-string-alignment distance; close enough to separate targets
    n, m = len(a), len(b)
    d = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        d[i][0] = i
    for j in range(m + 1):
        d[0][j] = j
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            d[i][j] = min(d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + cost)
            if i > 1 and j > 1 and a[i - 1] == b[j - 2] and a[i - 2] == b[j - 1]:
                d[i][j] = min(d[i][j], d[i - 2][j - 2] + 1)
    return d[n][m]


def pick_targets(candidates, min_distance=6):
    chosen = []
    for word in candidates:
        if all(osa_distance(word, c) >= min_distance for c in chosen):
            chosen.append(word)
    return chosen


MISSPELL_TARGETS = pick_targets(MISSPELL_CANDIDATES)

DISTRACTORS = """apple table chair street light stone glass cloud field grass
paper plant sound voice------""".split()
DISTRACTORS = [w for w in DISTRACTORS if w.isalpha()]


def typo_variants(word, rng, n):
    letters = "abcdefghijklmnopqrstuvwxyz"
    out = set()
    guard = 0
    while len(out) < n and guard < 200:
        guard += 1
        kind = rng.randrange(4)
        w = list(word)
        if kind == 0 and len(w) >= 3:  # transpose
            i = rng.randrange(len(w) - 1)
            w[i], w[i + 1] = w[i + 1], w[i]
        elif kind == 1 and len(w) >= 4:  # drop
            del w[rng.randrange(len(w))]
        elif kind == 2:  # double a letter
            i = rng.randrange(len(w))
            w.insert(i, w[i])
        else:  # substitute
            i = rng.randrange(len(w))
            w[i] = rng.choice(letters)
        v = "".join(w)
        if v != word and v.isalpha():
            out.add(v)
    return sorted(out)


def main():
    DATA.mkdir(exist_ok=True)
    rng = random.Random(20240501)

    surfaces = [en for _, en in LEXICON]
    glosses = {en: porter(en) for en in surfaces}

    # lexicon.tsv
    with open(DATA / "lexicon.tsv", "w", encoding="utf-8") as f:
        for ja, en in LEXICON:
            f.write(f"{ja}\t{glosses[en]}\n")

    # embeddings.txt: one seeded gaussian vector per gloss. The dimension is
    # high enough that random cross-correlations stay well below the decoy
    # margins.
    dim = 32
    with open(DATA / "embeddings.txt", "w", encoding="utf-8") as f:
        for g in sorted(set(glosses.values())):
            vrng = random.Random(f"emb:{g}")
            vec = [vrng.gauss(0.0, 1.0) for _ in range(dim)]
            norm = math.sqrt(sum(x * x for x in vec))
            vec = [x / norm for x in vec]
            f.write(g + " " + " ".join(f"{x:.4f}" for x in vec) + "\n")

    # bench_phrases.tsv: subject-object-verb and copula templates
    # Nouns reserved for decoy duty never appear as phrase content, so a
    # decoy can't collide with another caption's translated words.
    reserved_decoys = "sky sea wind snow rain door road town stars time".split()
    nouns = [(ja, en) for ja, en in LEXICON if en in (
        "cat dog fish bird water house school teacher friend book car train "
        "mountain river morning night money music movie photo "
        "vegetable fruit bread milk coffee tea egg meat rice garden window").split()]
    verbs = [(ja, en) for ja, en in LEXICON if en.endswith("s") and en not in
             ("stars",)]
    adjs = [(ja, en) for ja, en in LEXICON if en in
            "big small red blue white black fast slow new old quiet strong".split()]

    phrases = []
    seen_ja, seen_en = set(), set()

    # Decoys are reserved surfaces whose stem is themselves. Giving three
    # quarters of the phrases one decoy spreads true-pair cosine scores below
    # 1 the way real embeddings behave, without touching the Japanese side,
    # while keeping the argmax margin over partially overlapping neighbors.
    decoy_pool = [d for d in reserved_decoys if glosses.get(d) == d]
    drng = random.Random(31)

    def add(ja, en):
        if ja in seen_ja:
            return
        n_decoys = drng.choice([0, 1, 1, 1])
        picked = drng.sample(decoy_pool, n_decoys) if n_decoys else []
        for d in picked:
            en = en + " and the " + d
        if en in seen_en:
            return
        seen_ja.add(ja)
        seen_en.add(en)
        phrases.append((ja, en))

    prng = random.Random(77)
    subjects = [n for n in nouns if n[1] in ("cat", "dog", "bird", "teacher", "friend")]
    objects = [n for n in nouns if n[1] in (
        "fish", "water", "book", "bread", "milk", "coffee", "tea", "egg", "meat",
        "rice", "vegetable", "fruit", "photo", "music", "movie")]
    for s_ja, s_en in subjects:
        for o_ja, o_en in prng.sample(objects, 8):
            v_ja, v_en = prng.choice(verbs)
            add(f"{s_ja}が{o_ja}を{v_ja}", f"the {s_en} {v_en} the {o_en}")
    for a_ja, a_en in adjs:
        for n_ja, n_en in prng.sample(nouns, 5):
            add(f"{n_ja}は{a_ja}", f"the {n_en} is {a_en}")
    for n_ja, n_en in nouns:
        v_ja, v_en = prng.choice(verbs)
        add(f"{n_ja}と{v_ja}", f"it {v_en} with the {n_en}")

    with open(DATA / "bench_phrases.tsv", "w", encoding="utf-8") as f:
        for ja, en in phrases:
            f.write(f"{ja}\t{en}\n")

    # misspellings.txt (Birkbeck convention); variants never collide with the
    # dictionary so spellcheck has something to correct.
    dictionary = sorted(set(STOPWORDS) | set(surfaces) | set(MISSPELL_TARGETS) |
                        set(DISTRACTORS))
    dict_set = set(dictionary)
    with open(DATA / "misspellings.txt", "w", encoding="utf-8") as f:
        for word in MISSPELL_TARGETS:
            f.write(f"${word}\n")
            variants = [v for v in typo_variants(word, rng, 12) if v not in dict_set]
            for v in variants:
                f.write(v + "\n")
            if rng.random() < 0.5:  # occasional correctly spelled observation
                f.write(word + "\n")

    with open(DATA / "dictionary.txt", "w", encoding="utf-8") as f:
        f.write("\n".join(dictionary) + "\n")

    # unigrams.tsv: misspelling targets carry the heaviest counts so the prior
    # favors them among edit-distance peers.
    with open(DATA / "unigrams.tsv", "w", encoding="utf-8") as f:
        for w in dictionary:
            if w in MISSPELL_TARGETS:
                c = 20000 + (stable_hash(w) % 997) * 10
            elif w in STOPWORDS:
                c = 1500 + (stable_hash(w) % 97) * 10
            elif w in surfaces:
                c = 800 + (stable_hash(w) % 211)
            else:
                c = 100 + (stable_hash(w) % 89)
            f.write(f"{w}\t{c}\n")

    # bigrams.tsv: adjacent pairs from the bench phrases
    bigrams = {}
    for _, en in phrases:
        toks = en.split()
        for x, y in zip(toks, toks[1:]):
            bigrams[(x, y)] = bigrams.get((x, y), 0) + 40
    with open(DATA / "bigrams.tsv", "w", encoding="utf-8") as f:
        for (x, y), c in sorted(bigrams.items()):
            f.write(f"{x} {y}\t{c}\n")

    with open(DATA / "stopwords_en.txt", "w", encoding="utf-8") as f:
        f.write("\n".join(sorted(set(STOPWORDS))) + "\n")
    with open(DATA / "particles_ja.txt", "w", encoding="utf-8") as f:
        f.write("\n".join(PARTICLES) + "\n")

    print(f"lexicon {len(LEXICON)}, phrases {len(phrases)}, dictionary {len(dictionary)}")


if __name__ == "__main__":
    main()
