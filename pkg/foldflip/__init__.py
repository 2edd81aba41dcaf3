'''Sampling and analysis of mountain-valley assignments of origami crease
patterns. :func:`main` runs the command line interface.'''

__version__ = '1.0.0'


def main(argv=None):
    '''Run the command given in *argv* (default to ``sys.argv[1:]``). Any
    error raised by a command is printed and the process exits with
    status 1.'''
    import sys
    from foldflip.cli import program, log_error

    args = list(sys.argv[1:] if argv is None else argv) or ['-h']
    try:
        program.execute(args)
    except Exception as e:
        log_error(e, stream=sys.stderr)
        sys.exit(1)


if __name__ == '__main__':
    main()
