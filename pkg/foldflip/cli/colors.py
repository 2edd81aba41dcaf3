'''Color codes for terminal output: verdicts in green or red, mountains in
red and valleys in cyan. The COLOR environment variable (``yes``, ``no`` or
``auto``) decides whether they are emitted.
'''

import os
import sys


def color_enabled(stream=None):
    '''Whether output written to *stream* (stdout by default) is colored.
    ``auto`` colors terminals only.'''
    setting = os.getenv('COLOR', 'auto').strip().lower()
    if setting in ('yes', 'no'):
        return setting == 'yes'
    stream = sys.stdout if stream is None else stream
    isatty = getattr(stream, 'isatty', None)
    return bool(isatty is not None and isatty())


try:
    import colorama

    colorama.init(strip=not color_enabled())
    GREEN = colorama.Fore.GREEN
    YELLOW = colorama.Fore.YELLOW
    RED = colorama.Fore.RED
    CYAN = colorama.Fore.CYAN
    BRIGHT, RESET = colorama.Style.BRIGHT, colorama.Style.RESET_ALL
except ImportError:  # pragma: no cover
    colorama = None
    GREEN = YELLOW = RED = CYAN = BRIGHT = RESET = ''

VERDICT_COLORS = {True: GREEN, False: RED}
MV_COLORS = {'M': RED, 'V': CYAN}


def plain_stream(stream):
    '''Wrap *stream* so that color codes written to it are dropped, unless
    :func:`color_enabled` says *stream* takes them.'''
    if colorama is None or color_enabled(stream):
        return stream
    return colorama.AnsiToWin32(stream, strip=True).stream
