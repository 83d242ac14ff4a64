"""Ground natural-language sentences to concept generators.

Shows the full pipeline: lowercase, punctuation strip, greedy multiword
vocabulary match, stopword filter, suffix-rule lemmatization gated on the
vocabulary.

Run:  python demos/02_grounding_text.py
"""

import json

from abductive_qa import kb
from abductive_qa.extract import ExtractionConfig, extract_concepts, normalize_token


def dump_line(rel, start, end, weight):
    meta = json.dumps({"weight": weight})
    return f"/a/x\t/r/{rel}\t/c/{start}\t/c/{end}\t{meta}"


net = kb.build_network(
    [
        dump_line("IsA", "en/woman", "en/person", 2.0),
        dump_line("UsedFor", "en/piano", "en/music", 1.0),
        dump_line("HasSubevent", "en/play", "en/fun", 0.5),
        dump_line("UsedFor", "en/play_piano", "en/entertainment", 1.0),
        dump_line("IsA", "en/grand_piano", "en/piano", 2.0),
    ]
)

sentences = [
    "A woman is playing piano",      # "playing" -> lemma "play"
    "She loves the grand piano.",    # multiword phrase wins over "piano"
    "play piano",                    # longest match: play_piano, not play+piano
    "The the the!",                  # stopwords only -> nothing grounds
]

print("== extraction ==")
for text in sentences:
    concepts = extract_concepts(text, net)
    uris = [net.concept_uri(c) for c in concepts]
    print(f"{text!r:40s} -> {uris}")

print("\n== lemmatization is vocabulary-gated ==")
for token in ["Playing", "pianos", "xyzzying"]:
    print(f"{token!r:12s} -> {normalize_token(token, net)!r}")

print("\n== verb extraction is a config switch ==")
text = "A woman is playing piano"
for lemmatize in (True, False):
    config = ExtractionConfig(lemmatize=lemmatize)
    uris = [net.concept_uri(c) for c in extract_concepts(text, net, config)]
    print(f"lemmatize={lemmatize!s:5s} -> {uris}")
