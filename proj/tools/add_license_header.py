#!/usr/bin/env python3
"""Prepends the Apache-2.0 header to C++ sources that lack it."""

import pathlib
import sys

HEADER = """\
// Copyright 2026 The lopsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

"""

DIRS = ("include", "src", "tools", "tests")


def main() -> int:
    root = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else ".")
    changed = 0
    for d in DIRS:
        for path in sorted((root / d).rglob("*")):
            if path.suffix not in (".hpp", ".cpp"):
                continue
            text = path.read_text()
            if text.startswith("// Copyright"):
                continue
            path.write_text(HEADER + text)
            changed += 1
    print(f"added header to {changed} files")
    return 0


if __name__ == "__main__":
    sys.exit(main())
