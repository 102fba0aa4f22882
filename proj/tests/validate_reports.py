# Copyright 2026 The udesign Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Runs every udesign subcommand in JSON mode and validates the reports."""

import json
import subprocess
import sys

import jsonschema

RUNS = [
    ["verify-lemmas", "--qubits", "2", "--ell", "2"],
    ["verify-lemmas", "--qubits", "1", "--ell", "1", "--tolerance", "-1"],
    ["bracket", "--qubits", "2", "--ell-max", "3"],
    ["bracket", "--qubits", "9", "--ell-max", "2"],
    ["ensemble", "--qubits", "2", "--samples", "1000"],
    ["ensemble", "--qubits", "2", "--kind", "hamiltonian", "--j-star", "0.5", "--samples", "0"],
    ["ensemble", "--qubits", "1", "--kind", "continuous", "--samples", "500"],
    ["ell-for-epsilon", "--qubits", "10", "--epsilon", "1e-6"],
    ["frame-potential", "--qubits", "2", "--ell-max", "3"],
]


def main():
    tool, schema_path = sys.argv[1], sys.argv[2]
    with open(schema_path) as f:
        schema = json.load(f)
    jsonschema.Draft7Validator.check_schema(schema)
    validator = jsonschema.Draft7Validator(schema)
    failures = 0
    for args in RUNS:
        proc = subprocess.run([tool, *args, "--format", "json", "--threads", "1"],
                              capture_output=True, text=True)
        if proc.returncode not in (0, 1):
            print(f"{' '.join(args)}: exit {proc.returncode}: {proc.stderr.strip()}")
            failures += 1
            continue
        errors = list(validator.iter_errors(json.loads(proc.stdout)))
        for error in errors:
            print(f"{' '.join(args)}: {error.message}")
        failures += bool(errors)
        print(f"{' '.join(args)}: {'invalid' if errors else 'valid'}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
