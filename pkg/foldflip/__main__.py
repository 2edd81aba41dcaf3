"""Module allowing for ``python -m foldflip ...``."""
from foldflip import main

main()
