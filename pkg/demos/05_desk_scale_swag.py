"""Desk-scale reproduction on real data (requires downloads).

Needs network access once, to fetch:
  - the ConceptNet 5.x assertions dump (conceptnet-assertions-*.csv.gz)
  - SWAG validation CSV (val.csv from the SWAG release, renamed swag_val.csv)
  - optionally HellaSWAG validation JSONL (hellaswag_val.jsonl)

Place them under ./data (or set ABDUCTIVE_QA_DATA) and run:

  python demos/05_desk_scale_swag.py

First run builds data/conceptnet-en.idx from the dump (one-time, ~minutes);
subsequent runs load the index directly. The same flow is what the gated
acceptance tests (criteria 7 and 8) execute.
"""

import os
import sys
import time
from pathlib import Path

from abductive_qa import kb
from abductive_qa.datasets import load_dataset
from abductive_qa.harness import RunParams, evaluate

DATA = Path(os.environ.get("ABDUCTIVE_QA_DATA", "data"))


def conceptnet_network():
    index = DATA / "conceptnet-en.idx"
    if index.exists():
        print(f"loading {index} ...")
        return kb.load_index(str(index))
    dumps = sorted(DATA.glob("conceptnet-assertions-*.csv*"))
    if not dumps:
        sys.exit(
            f"no ConceptNet dump or index under {DATA}/ - download "
            "conceptnet-assertions-5.x.csv.gz there first"
        )
    print(f"building index from {dumps[0]} (one-time) ...")
    start = time.perf_counter()
    net = kb.build_network(kb.open_dump(str(dumps[0])))
    kb.persist_index(net, str(index))
    print(f"  {net.concept_count} concepts, {net.edge_count} edges "
          f"in {time.perf_counter() - start:.0f}s -> {index}")
    return net


def main():
    net = conceptnet_network()
    swag = DATA / "swag_val.csv"
    if not swag.exists():
        sys.exit(f"{swag} not found - download the SWAG validation split")

    data = list(load_dataset(str(swag), "swag"))
    workers = min(8, os.cpu_count() or 1)
    print(f"scoring 500-question seeded subset with {workers} workers ...")

    full = evaluate(net, data, RunParams(), limit=500, seed=42, workers=workers)
    print(f"full model:        accuracy={full.accuracy:.3f} "
          f"indifference={full.indifference_rate:.3f} "
          f"({full.elapsed_seconds:.0f}s)")

    bare = evaluate(
        net, data, RunParams(contextualize=False), limit=500, seed=42, workers=workers
    )
    print(f"no context (k=0):  accuracy={bare.accuracy:.3f}")
    print(f"contextualization gain: {full.accuracy - bare.accuracy:+.3f}")

    hellaswag = DATA / "hellaswag_val.jsonl"
    if hellaswag.exists():
        hs = list(load_dataset(str(hellaswag), "hellaswag"))
        report = evaluate(net, hs, RunParams(), limit=500, seed=42, workers=workers)
        print(f"hellaswag:         accuracy={report.accuracy:.3f} "
              f"indifference={report.indifference_rate:.3f}")


if __name__ == "__main__":
    main()
