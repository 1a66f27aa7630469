"""Write the built-in fixture directories as JSON dumps.

    python scripts/make_fixtures.py fixtures/
"""
import argparse
import json
from pathlib import Path

from webdirq import fixtures as F


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("outdir", type=Path)
    ap.add_argument("--synthetic", action="store_true", help="also write the 753-category synthetic directory")
    args = ap.parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)
    docs = {name: build() for name, build in F.FIXTURES.items()}
    if args.synthetic:
        docs["synthetic-753"] = F.random_directory(2010, 753, 25185)
    for name, doc in docs.items():
        path = args.outdir / f"{name}.json"
        path.write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")
        print(path)


if __name__ == "__main__":
    main()
