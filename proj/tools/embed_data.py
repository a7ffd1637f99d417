#!/usr/bin/env python3
"""Regenerates include/ftc/default_data.hpp from the JSON files in data/."""

import pathlib

ROOT = pathlib.Path(__file__).resolve().parent.parent
OUT = ROOT / "include" / "ftc" / "default_data.hpp"

FILES = [
    ("kDefaultPatternBankJson", ROOT / "data" / "patterns.json"),
    ("kDefaultPromptSetJson", ROOT / "data" / "prompts.json"),
]


def main() -> None:
    parts = [
        "#pragma once\n",
        "// Generated by tools/embed_data.py from data/*.json. Do not edit by hand.\n",
        "#include <string_view>\n",
        "namespace ftc {\n",
    ]
    for name, path in FILES:
        body = path.read_text(encoding="utf-8")
        assert ")json\"" not in body
        parts.append(f'inline constexpr std::string_view {name} = R"json({body})json";\n')
    parts.append("}  // namespace ftc\n")
    OUT.write_text("\n".join(parts), encoding="utf-8")


if __name__ == "__main__":
    main()
