import sys

from ._core import main

sys.exit(main(sys.argv[1:]))
