import sys

from natcomp.harness.cli import main

sys.exit(main())
