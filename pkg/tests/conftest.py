import os
import shlex
from pathlib import Path

from dcontact.cli import main

CORPUS = Path(os.environ.get("DCONTACT_CORPUS", Path(__file__).parent / "corpus"))


def corpus_cases():
    """Rows of cases.txt as (case, manifest path, argv tail)."""
    out = []
    for line in (CORPUS / "cases.txt").read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        case, manifest, *rest = shlex.split(line)
        out.append((case, CORPUS / manifest, rest))
    return out


def run_case(manifest, rest, capsys):
    """Run the CLI in machine mode; return the golden text (exit line plus stdout)."""
    cmd, *opts = rest
    code = main([cmd, str(manifest), *opts, "--machine"])
    out = capsys.readouterr().out
    return f"exit {code}\n{out}"
