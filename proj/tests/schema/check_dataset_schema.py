#!/usr/bin/env python3
"""Validates JSON Lines datasets against data/schema/dataset.schema.json.

Usage: check_dataset_schema.py SCHEMA DATASET...
Also checks that the header comes first and that its session count matches.
"""
import json
import sys

import jsonschema


def check(schema, cls, path):
    errors = 0
    sessions = 0
    header = None
    with open(path, encoding="utf-8") as f:
        for n, line in enumerate(f, 1):
            rec = json.loads(line)
            kind = rec.get("record")
            if kind not in schema["$defs"] or kind in ("token", "noun_phrase", "questionnaire"):
                print(f"{path}:{n}: unknown record type {kind!r}")
                errors += 1
                continue
            # Validate against the record's own definition for readable errors;
            # the top-level oneOf is the published contract.
            sub = {k: v for k, v in schema.items() if k != "oneOf"}
            sub["$ref"] = f"#/$defs/{kind}"
            before = errors
            for e in cls(sub).iter_errors(rec):
                where = "/".join(str(p) for p in e.absolute_path) or kind
                print(f"{path}:{n}: {where}: {e.message}")
                errors += 1
            if errors == before and not cls(schema).is_valid(rec):
                print(f"{path}:{n}: record does not match the top-level schema")
                errors += 1
            if n == 1:
                if rec.get("record") != "header":
                    print(f"{path}:1: first record is not the header")
                    errors += 1
                header = rec
            elif rec.get("record") == "header":
                print(f"{path}:{n}: second header")
                errors += 1
            if rec.get("record") == "session":
                sessions += 1
    if header is not None and header.get("sessions") != sessions:
        print(f"{path}: header says {header.get('sessions')} sessions, found {sessions}")
        errors += 1
    print(f"{path}: {'ok' if errors == 0 else f'{errors} errors'} ({sessions} sessions)")
    return errors


def main():
    with open(sys.argv[1], encoding="utf-8") as f:
        schema = json.load(f)
    cls = jsonschema.validators.validator_for(schema)
    cls.check_schema(schema)
    total = sum(check(schema, cls, p) for p in sys.argv[2:])
    sys.exit(1 if total else 0)


if __name__ == "__main__":
    main()
