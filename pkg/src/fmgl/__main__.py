import sys

from fmgl.cli import main

sys.exit(main())
