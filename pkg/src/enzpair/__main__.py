import sys

from enzpair.cli import main

sys.exit(main())
