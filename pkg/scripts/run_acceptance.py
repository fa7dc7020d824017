"""Run the acceptance criteria outside pytest and print one line each."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from test_acceptance import CRITERIA, evaluate  # noqa: E402


def main(argv=None):
    wanted = {int(a) for a in (argv if argv is not None else sys.argv[1:])}
    failed = 0
    for criterion in CRITERIA:
        if wanted and criterion[0] not in wanted:
            continue
        ok, in_time, line = evaluate(*criterion)
        print(line, flush=True)
        failed += not (ok and in_time)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
