import sys

from netlue.cli import main

sys.exit(main())
