import sys

from mclaw.main import main

if __name__ == "__main__":
    sys.exit(main())
