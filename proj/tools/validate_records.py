#!/usr/bin/env python3
"""Validate result records against the shipped schema."""
import argparse
import json
import sys
from pathlib import Path

import jsonschema


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("schema", type=Path)
    ap.add_argument("records", type=Path, nargs="+")
    args = ap.parse_args()
    schema = json.loads(args.schema.read_text())
    validator = jsonschema.Draft202012Validator(schema)
    bad = 0
    for path in args.records:
        errors = sorted(validator.iter_errors(json.loads(path.read_text())), key=lambda e: list(e.path))
        for e in errors:
            print(f"{path}: {'/'.join(map(str, e.path)) or '<root>'}: {e.message}")
        bad += bool(errors)
    print(f"{len(args.records) - bad}/{len(args.records)} records valid")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
