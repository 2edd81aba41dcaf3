if __name__ == '__main__':
    import sys
    import pytest

    ret = pytest.main(['--strict-markers'])
    sys.exit(ret)
