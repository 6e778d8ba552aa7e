"""Run the acceptance suite and forward its exit status."""
import subprocess
import sys
from pathlib import Path


def main():
    test = Path(__file__).resolve().parent.parent / "tests" / "test_acceptance.py"
    return subprocess.call([sys.executable, "-m", "pytest", str(test),
                            "-v", "-s"] + sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
