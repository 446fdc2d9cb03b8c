import sys

from gwepi.cli import main

sys.exit(main())
