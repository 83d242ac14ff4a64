"""Build a semantic-network index from assertion-dump lines and query it.

The real input is a ConceptNet 5.x assertions dump (tab-separated, five
fields, JSON metadata); here we fabricate a handful of lines in the exact
same layout so the demo is self-contained.

Run:  python demos/01_ingest_and_query.py
"""

import json
import tempfile

from abductive_qa import kb


def dump_line(rel, start, end, weight):
    meta = json.dumps({"dataset": "/d/demo", "weight": weight})
    return "\t".join(
        [f"/a/[/r/{rel}/,/c/{start}/,/c/{end}/]", f"/r/{rel}", f"/c/{start}", f"/c/{end}", meta]
    )


lines = [
    dump_line("IsA", "en/piano", "en/instrument", 2.0),
    dump_line("UsedFor", "en/piano", "en/music", 1.0),
    dump_line("IsA", "en/woman", "en/person", 2.0),
    dump_line("CapableOf", "en/person", "en/music", 1.0),
    dump_line("NotCapableOf", "en/dog", "en/fly", 1.0),  # negated weight
    dump_line("IsA", "fr/chien", "fr/animal", 1.0),      # filtered: not English
    dump_line("IsA", "en/piano", "en/piano", 1.0),       # filtered: self-loop
]

print("== ingest ==")
net = kb.build_network(lines)
print(f"concepts={net.concept_count} edges={net.edge_count}")
print("counters:", {k: v for k, v in net.stats.items() if v})

print("\n== direct-relation lookup (phi) ==")
piano = net.concept_id("en/piano")
instrument = net.concept_id("en/instrument")
print("phi(piano, instrument) ->", net.phi(piano, instrument))
print("phi(instrument, piano) -> same edge, direction preserved:")
print("   ", net.phi(instrument, piano))
dog, fly = net.concept_id("en/dog"), net.concept_id("en/fly")
print("phi(dog, fly) ->", net.phi(dog, fly), " (negative: NotCapableOf)")
woman = net.concept_id("en/woman")
print("phi(woman, piano) ->", net.phi(woman, piano), " (no direct assertion)")

print("\n== neighborhoods ==")
for edge in net.neighbors(piano):
    print(f"piano --{edge.relation}({edge.weight:+.1f})--> "
          f"{net.concept_uri(edge.neighbor)}  [{edge.direction}]")

print("\n== persistence round-trip ==")
with tempfile.NamedTemporaryFile(suffix=".idx") as tmp:
    kb.persist_index(net, tmp.name)
    loaded = kb.load_index(tmp.name)
    print(f"reloaded: concepts={loaded.concept_count} "
          f"checksum=0x{loaded.checksum:016x}")
    assert loaded.neighbors(piano) == net.neighbors(piano)
    print("adjacency identical after reload")
