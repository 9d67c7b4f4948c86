"""Allow running pebblebound as a module: python -m pebblebound"""

from pebblebound.cli import main

main()
