import sys

from hitmix.main import run

sys.exit(run())
