import sys

from fglschur.cli import main

sys.exit(main())
