"""Regenerate the stored CLI outputs in tests/golden.

Each case in cases.json is run as ``python -m wsim <argv>`` with the golden
directory as cwd, so file names echoed in the output stay relative.
Review the diff before committing; the golden tests compare bytes.
"""
import json
import subprocess
import sys
from pathlib import Path

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"


def run_case(argv):
    return subprocess.run(
        [sys.executable, "-m", "wsim", *argv], cwd=GOLDEN, capture_output=True, check=False
    )


def main():
    cases = json.loads((GOLDEN / "cases.json").read_text())
    for name, argv in cases.items():
        proc = run_case(argv)
        (GOLDEN / f"{name}.stdout").write_bytes(proc.stdout)
        (GOLDEN / f"{name}.stderr").write_bytes(proc.stderr)
        (GOLDEN / f"{name}.exit").write_text(f"{proc.returncode}\n")
        print(f"{name}: exit {proc.returncode}")


if __name__ == "__main__":
    main()
