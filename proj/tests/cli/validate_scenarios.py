# Copyright 2026 The decdyn Authors
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

"""Validates the shipped scenarios against schemas/scenario.schema.json and
checks that the invalid fixtures under tests/cli/data are rejected."""

import json
import pathlib
import sys

import jsonschema


def main(root):
    root = pathlib.Path(root)
    schema = json.loads((root / "schemas" / "scenario.schema.json").read_text())
    validator = jsonschema.Draft202012Validator(schema)
    failures = 0
    for path in sorted((root / "scenarios").glob("*.json")):
        errors = list(validator.iter_errors(json.loads(path.read_text())))
        print(f"{path.name}: {'valid' if not errors else errors[0].message}")
        failures += bool(errors)
    for name in ("unknown_field.json", "bad_version.json"):
        doc = json.loads((root / "tests" / "cli" / "data" / name).read_text())
        rejected = not validator.is_valid(doc)
        print(f"{name}: {'rejected' if rejected else 'unexpectedly valid'}")
        failures += not rejected
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1]))
