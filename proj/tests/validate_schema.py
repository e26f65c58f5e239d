#!/usr/bin/env python3
# Copyright 2026 The qcfa-lab Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Validates qcfa JSON output against the bundled schemas.

usage: validate_schema.py QCFA_BINARY SCHEMA_DIR
Exits 77 (skip) when the jsonschema package is missing.
"""

import json
import os
import subprocess
import sys
import tempfile

try:
    import jsonschema
except ImportError:
    print("jsonschema not installed; skipping")
    sys.exit(77)

RECORD_COMMANDS = [
    ["verify"],
    ["run", "--machine", "qcfa-lm:0.25", "--input", "aca", "--trials", "50"],
    ["run", "--machine", "pfa-lm:2", "--input", "ab", "--trials", "10"],
    ["analyze", "--machine", "pfa-lm:1", "--input", "aca"],
    ["analyze", "--machine", "qcfa-lm-k:2", "--input", "acaa", "--tail-tol", "1e-6"],
    ["sweep", "--machine", "pfa-lm:1", "--sizes", "1..3", "--trials", "20"],
    ["formulas", "--n", "1", "--m", "2", "--k", "2", "--epsilon", "0.25", "--d", "1", "--reps", "64"],
]


def main():
    binary, schema_dir = sys.argv[1], sys.argv[2]
    with open(os.path.join(schema_dir, "experiment_record.schema.json")) as f:
        record_schema = json.load(f)
    with open(os.path.join(schema_dir, "machine.schema.json")) as f:
        machine_schema = json.load(f)
    jsonschema.Draft202012Validator.check_schema(record_schema)
    jsonschema.Draft202012Validator.check_schema(machine_schema)

    for args in RECORD_COMMANDS:
        out = subprocess.run([binary] + args, check=True, capture_output=True, text=True).stdout
        jsonschema.validate(json.loads(out), record_schema)
        print("ok:", " ".join(args))

    bundled = subprocess.run([binary, "--schema"], check=True, capture_output=True, text=True).stdout
    assert json.loads(bundled) == record_schema, "bundled record schema differs from schema/"

    # Machine files: export a built machine through a file: round trip.
    with tempfile.TemporaryDirectory() as tmp:
        for spec in ("pfa-lm:1", "qcfa-lm-k:1"):
            path = os.path.join(tmp, "m.json")
            doc = subprocess.run(
                [binary, "--schema", "machine"], check=True, capture_output=True, text=True).stdout
            assert json.loads(doc) == machine_schema
            subprocess.run([binary, "export", "--machine", spec, "--out", path], check=True)
            with open(path) as f:
                jsonschema.validate(json.load(f), machine_schema)
            print("ok: machine", spec)
    return 0


if __name__ == "__main__":
    sys.exit(main())
