import sys


def run_tests():
    import pytest

    try:
        import kplexpart
    except ImportError as e:
        raise ImportError(e)

    retcode = pytest.main()
    sys.exit(retcode)


def run_cli():
    from kplexpart.cli import cli_main

    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    run_cli()
