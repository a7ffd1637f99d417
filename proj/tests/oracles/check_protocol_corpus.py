#!/usr/bin/env python3
"""Validate tests/data/protocol/corpus.json against schemas.json.

Requests that the server accepted must match the request schema; every
response must match either the endpoint's response schema (status 200) or
the error envelope. Exit status 0 on success.
"""

import json
import pathlib
import sys

import jsonschema

ROUTES = {"/v1/classify": "classify", "/v1/generate": "generate"}


def main():
    here = pathlib.Path(__file__).resolve().parent.parent / "data" / "protocol"
    schemas = json.loads((here / "schemas.json").read_text())
    cases = json.loads((here / "corpus.json").read_text())["cases"]

    def check(instance, name):
        ref = {"$ref": f"#/$defs/{name}", "$defs": schemas["$defs"]}
        jsonschema.validate(instance, ref, cls=jsonschema.Draft202012Validator)

    failures = 0
    for case in cases:
        route = ROUTES.get(case["path"])
        try:
            if case["status"] == 200:
                check(case["request"], route + "_request")
                check(case["response"], route + "_response")
            else:
                check(case["response"], "error")
        except (jsonschema.ValidationError, KeyError, TypeError) as e:
            failures += 1
            print(f"FAIL {case['name']}: {e}", file=sys.stderr)
    print(f"{len(cases) - failures}/{len(cases)} corpus cases schema-valid")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
