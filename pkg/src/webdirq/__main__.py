import sys

from webdirq.cli import main

sys.exit(main())
