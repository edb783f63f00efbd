import sys

from quadorder.cli import main

sys.exit(main())
