import io

import pytest

import foldflip.cli.colors as colors

FORCED_CASES = [
    ('yes', True),
    ('YES', True),
    (' yes ', True),
    ('no', False),
    ('No', False),
]


@pytest.mark.parametrize('setting,expected', FORCED_CASES)
def test_color_enabled_forced(monkeypatch, setting, expected):
    monkeypatch.setenv('COLOR', setting)
    assert colors.color_enabled() is expected


def test_color_enabled_auto(monkeypatch, mocker):
    monkeypatch.setenv('COLOR', 'auto')
    isatty_mock = mocker.patch('sys.stdout.isatty')

    isatty_mock.return_value = True
    assert colors.color_enabled()

    isatty_mock.return_value = False
    assert not colors.color_enabled()


def test_color_enabled_default_is_auto(monkeypatch, mocker):
    monkeypatch.delenv('COLOR', raising=False)
    mocker.patch('sys.stdout.isatty', return_value=True)
    assert colors.color_enabled()


def test_color_enabled_stream(monkeypatch, mocker):
    monkeypatch.setenv('COLOR', 'auto')
    assert not colors.color_enabled(io.StringIO())
    assert not colors.color_enabled(object())
    tty = mocker.Mock()
    tty.isatty.return_value = True
    assert colors.color_enabled(tty)
    monkeypatch.setenv('COLOR', 'yes')
    assert colors.color_enabled(io.StringIO())


def test_verdict_colors():
    assert colors.VERDICT_COLORS[True] == colors.GREEN
    assert colors.VERDICT_COLORS[False] == colors.RED
    assert colors.MV_COLORS == {'M': colors.RED, 'V': colors.CYAN}


def test_plain_stream(monkeypatch):
    monkeypatch.setenv('COLOR', 'auto')
    target = io.StringIO()
    colors.plain_stream(target).write(colors.CYAN + 'V' + colors.RESET)
    assert target.getvalue() == 'V'

    monkeypatch.setenv('COLOR', 'yes')
    target = io.StringIO()
    assert colors.plain_stream(target) is target
