import sys

from mcse.cli import main

sys.exit(main())
