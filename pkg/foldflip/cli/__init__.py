"""In this module the CLI interface is created."""

import configparser
import inspect
import os
import sys
from contextlib import contextmanager
from fractions import Fraction

import numpy as np
from mando import Program

try:
    # Python 3.11+
    import tomllib

    TOMLLIB_PRESENT = True
except ImportError:
    try:
        # Support for Python <3.11
        import tomli as tomllib

        TOMLLIB_PRESENT = True
    except ImportError:
        TOMLLIB_PRESENT = False

from foldflip.chain import run_chain, ChainConfig, exact_sample_square_grid
from foldflip.cli.colors import BRIGHT, RED, RESET, plain_stream
from foldflip.cli.harvest import (
    ChainHarvester,
    ColoringHarvester,
    FlipGraphHarvester,
    GlobalHarvester,
    MixingHarvester,
    VertexHarvester,
)
from foldflip.cli.tools import (
    manifest_path,
    read_pattern,
    render_svg,
    resolve_seed,
    run_manifest,
    write_json,
    write_manifest,
    write_text,
)
from foldflip.core import (MVAssignment, dumps_pattern,
                           is_locally_flat_foldable, save_pattern)
from foldflip.flipgraph import graph_to_dict
from foldflip.globalfold import (Subgrid, is_globally_flat_foldable,
                                 neighborhood, sigma_sp, subgrid_faces)
from foldflip.patterns import (PatternSpec, generate, reference_assignment,
                               square_grid)


CONFIG_SECTION_NAME = "foldflip"


class FileConfig(object):
    """
    Yield default options by reading local configuration files.
    """

    def __init__(self):
        self.file_cfg = self.file_config()

    def get_value(self, key, type, default):
        if not self.file_cfg.has_option(CONFIG_SECTION_NAME, key):
            return default
        if type == int:
            return self.file_cfg.getint(CONFIG_SECTION_NAME, key, fallback=default)
        if type == float:
            return self.file_cfg.getfloat(CONFIG_SECTION_NAME, key,
                                          fallback=default)
        if type == bool:
            return self.file_cfg.getboolean(CONFIG_SECTION_NAME, key, fallback=default)
        else:
            return self.file_cfg.get(CONFIG_SECTION_NAME, key, fallback=default)

    @staticmethod
    def toml_config():
        if not TOMLLIB_PRESENT:
            return {}

        try:
            with open("pyproject.toml", "rb") as pyproject_file:
                pyproject = tomllib.load(pyproject_file)
            config_dict = pyproject["tool"]
        except tomllib.TOMLDecodeError as exc:
            raise exc
        except Exception:
            config_dict = {}
        # configparser only takes the sections it knows how to hold
        return dict((k, v) for k, v in config_dict.items()
                    if k == CONFIG_SECTION_NAME and isinstance(v, dict))

    @staticmethod
    def file_config():
        """Return any file configuration discovered"""
        config = configparser.ConfigParser()
        config.read(["setup.cfg", "tox.ini",
                     os.path.expanduser("~/.foldflip.cfg")])
        for path in (os.getenv("FOLDFLIPCFG", None), "foldflip.cfg"):
            if path is not None and os.path.exists(path):
                with open(path) as cfg_file:
                    config.read_file(cfg_file)
                break
        config.read_dict(FileConfig.toml_config())
        return config


_cfg = FileConfig()

program = Program(version=sys.modules["foldflip"].__version__)


def _eps(value):
    eps = Fraction(value)
    if not 0 < eps < 1:
        raise ValueError("eps must lie strictly between 0 and 1")
    return eps


def _emit_manifest(command, seed, outputs, manifest, out):
    path = manifest_path(manifest, out)
    if path is None:
        log("seed: {0}", seed, stream=sys.stderr)
        return
    write_manifest(path, run_manifest(command, seed, outputs))


def _required(value, flag):
    if not value:
        raise ValueError("{0} is required".format(flag))
    return value


def _finish(harvester):
    if harvester.failed:
        sys.exit(1)


@program.command
@program.arg("dims", nargs="+", type=int)
@program.arg("theta", type=float)
@program.arg("family", choices=("square_grid", "square_twist", "miura",
                                "triangle", "kite", "single_vertex"))
@program.arg("mode", choices=("alternating", "uniform"))
def gen(
    family="square_grid",
    dims=None,
    theta=_cfg.get_value("theta", float, None),
    mode=_cfg.get_value("mode", str, "alternating"),
    out=None,
    svg=None,
    reference=False,
    show_parity=_cfg.get_value("show_parity", bool, False),
):
    """Generate a crease pattern and write it as JSON.

    :param -f, --family <str>: The pattern family.
    :param -d, --dims <int>: The dimensions: rows and columns, or n for a
        single vertex with 2n creases.
    :param -t, --theta <float>: The acute angle in degrees (Miura and kite).
    :param -m, --mode <str>: The square-twist tiling, alternating or uniform.
    :param -o, --out <str>: The JSON file (default to stdout).
    :param --svg <str>: Also render the pattern to this SVG file.
    :param -r, --reference: Include the reference assignment.
    :param --show-parity: Shade the faces of odd parity in the SVG.
    """
    if not dims:
        raise ValueError("--dims is required")
    pattern = generate(PatternSpec(family, tuple(dims), theta, mode))
    assignment = reference_assignment(pattern) if reference else None
    with outstream(out) as stream:
        save_pattern(pattern, stream, assignment)
    if svg:
        write_text(svg, render_svg(pattern, assignment, show_parity))


@program.command
@program.arg("action", choices=("sample", "count"))
@program.arg("seed", type=int)
def vertex(
    action,
    n=3,
    seed=_cfg.get_value("seed", int, None),
    count=1,
    json=False,
    output_file=None,
    manifest=None,
):
    """Count or exactly sample the valid MV assignments of the equal-angle
    vertex with 2n creases.

    :param action: Either sample or count.
    :param -n, --n <int>: Half the number of creases.
    :param -s, --seed <int>: The random seed (default to system entropy).
    :param -c, --count <int>: How many assignments to sample.
    :param -j, --json: Format results in JSON.
    :param -O, --output-file <str>: The output file (default to stdout).
    :param --manifest <str>: Where to write the run manifest.
    """
    if action == "sample":
        seed = resolve_seed(seed)
    config = Config(action=action, seed=seed, count=count)
    harvester = VertexHarvester([n], config)
    with outstream(output_file) as stream:
        log_result(harvester, json=json, stream=stream)
    if action == "sample":
        _emit_manifest("vertex", seed, [output_file], manifest, output_file)
    _finish(harvester)


@program.command
@program.arg("pattern", nargs="+")
@program.arg("seed", type=int)
def mcmc(
    pattern=None,
    steps=_cfg.get_value("steps", int, 1000),
    seed=_cfg.get_value("seed", int, None),
    start="reference",
    interval=_cfg.get_value("interval", int, 0),
    trajectories=1,
    workers=_cfg.get_value("workers", int, 1),
    out=None,
    json=False,
    output_file=None,
    manifest=None,
):
    """Run the lazy face-flip Markov chain.

    :param -p, --pattern <str>: The JSON pattern files.
    :param -t, --steps <int>: The number of chain steps.
    :param -s, --seed <int>: The random seed (default to system entropy).
    :param --start <str>: reference, or a file holding the initial
        assignment.
    :param -i, --interval <int>: Record a trace row every this many steps.
    :param -k, --trajectories <int>: The number of independent trajectories.
    :param -w, --workers <int>: Worker processes for the trajectories.
    :param -o, --out <str>: Write the pattern with the final state of the
        first trajectory to this JSON file.
    :param -j, --json: Format results in JSON.
    :param -O, --output-file <str>: The output file (default to stdout).
    :param --manifest <str>: Where to write the run manifest.
    """
    targets = _required(pattern, "--pattern")
    seed = resolve_seed(seed)
    config = Config(
        steps=steps,
        seed=seed,
        start=start,
        interval=interval,
        trajectories=trajectories,
        workers=workers,
    )
    harvester = ChainHarvester(targets, config)
    with outstream(output_file) as stream:
        log_result(harvester, json=json, stream=stream)
    outputs = [output_file]
    if out:
        results = dict(harvester.results)
        data = results.get(pattern[0], {})
        if "final" in data:
            loaded = read_pattern(pattern[0])[0]
            write_text(out, dumps_pattern(
                loaded, MVAssignment.from_string(data["final"][0])) + "\n")
            outputs.append(out)
    _emit_manifest("mcmc", seed, outputs, manifest, out or output_file)
    _finish(harvester)


@program.command
@program.arg("pattern", nargs="*")
@program.arg("theta", type=float)
def mix(
    pattern=None,
    family=None,
    sizes=None,
    eps=_cfg.get_value("eps", str, "1/4"),
    theta=_cfg.get_value("theta", float, None),
    mode=_cfg.get_value("mode", str, "alternating"),
    csv=None,
    json=False,
    output_file=None,
):
    """Compute exact mixing times and spectral gaps of the face-flip chain.

    Either give pattern files or a family together with a list of sizes.

    :param -p, --pattern <str>: The JSON pattern files.
    :param -f, --family <str>: Generate this family instead of reading files.
    :param --sizes <str>: Comma separated sizes such as 1x2,2x2,2x3.
    :param -e, --eps <str>: The total variation threshold, e.g. 1/4.
    :param -t, --theta <float>: The acute angle in degrees (Miura and kite).
    :param -m, --mode <str>: The square-twist tiling.
    :param --csv <str>: Also write the rows to this CSV file.
    :param -j, --json: Format results in JSON.
    :param -O, --output-file <str>: The output file (default to stdout).
    """
    if family is not None:
        if not sizes:
            raise ValueError("--sizes is required with --family")
        targets = [s.strip() for s in sizes.split(",") if s.strip()]
    elif pattern:
        targets = pattern
    else:
        raise ValueError("give pattern files or --family and --sizes")
    config = Config(family=family, eps=_eps(eps), theta=theta, mode=mode)
    harvester = MixingHarvester(targets, config)
    with outstream(output_file) as stream:
        log_result(harvester, json=json, stream=stream)
    if csv:
        write_text(csv, harvester.as_csv())
    _finish(harvester)


@program.command("sample-exact")
@program.arg("dims", nargs=2, type=int)
@program.arg("seed", type=int)
def sample_exact(
    family="square_grid",
    dims=None,
    seed=_cfg.get_value("seed", int, None),
    count=1,
    output_file=None,
    manifest=None,
):
    """Draw exact uniform samples of the valid assignments of a square
    grid, one M/V string per line.

    :param -f, --family <str>: The pattern family; only square_grid.
    :param -d, --dims <int>: Rows and columns.
    :param -s, --seed <int>: The random seed (default to system entropy).
    :param -c, --count <int>: How many samples to draw.
    :param -O, --output-file <str>: The output file (default to stdout).
    :param --manifest <str>: Where to write the run manifest.
    """
    if family != "square_grid":
        raise ValueError("exact sampling is available for square_grid, got "
                         "{0!r}".format(family))
    if not dims:
        raise ValueError("--dims is required")
    seed = resolve_seed(seed)
    rng = np.random.default_rng(seed)
    m, n = dims
    with outstream(output_file) as stream:
        for _ in range(count):
            log(exact_sample_square_grid(m, n, rng).to_string(),
                noformat=True, stream=stream)
    _emit_manifest("sample-exact", seed, [output_file], manifest, output_file)


@program.command
@program.arg("pattern", nargs="+")
@program.arg("check", choices=("hypercube", "quotient"))
@program.arg("strategy", choices=("auto", "scan", "bfs"))
def ofg(
    pattern=None,
    check=None,
    strategy=_cfg.get_value("strategy", str, "auto"),
    out=None,
    json=False,
    output_file=None,
):
    """Build the origami flip graph of each pattern and report its
    structure.

    :param -p, --pattern <str>: The JSON pattern files.
    :param -c, --check <str>: Run the hypercube or quotient check.
    :param --strategy <str>: State enumeration: auto, scan or bfs.
    :param -o, --out <str>: Write the graph of the first pattern as JSON.
    :param -j, --json: Format results in JSON.
    :param -O, --output-file <str>: The output file (default to stdout).
    """
    targets = _required(pattern, "--pattern")
    config = Config(check=check, strategy=strategy)
    harvester = FlipGraphHarvester(targets, config)
    with outstream(output_file) as stream:
        log_result(harvester, json=json, stream=stream)
    if out and pattern[0] in harvester.graphs:
        write_json(out, graph_to_dict(harvester.graphs[pattern[0]]))
    _finish(harvester)


@program.command("miura-color")
@program.arg("pattern", nargs="+")
def miura_color(
    pattern=None,
    assignment=None,
    coloring=None,
    json=False,
    output_file=None,
):
    """Map Miura-ori assignments to anchored 3-colorings of the face grid,
    or back with --coloring.

    :param -p, --pattern <str>: The JSON Miura pattern files.
    :param -a, --assignment <str>: The assignment file (default to the one
        stored in the pattern).
    :param -c, --coloring <str>: A coloring JSON file to map back.
    :param -j, --json: Format results in JSON.
    :param -O, --output-file <str>: The output file (default to stdout).
    """
    targets = _required(pattern, "--pattern")
    config = Config(assignment=assignment, coloring=coloring)
    harvester = ColoringHarvester(targets, config)
    with outstream(output_file) as stream:
        log_result(harvester, json=json, stream=stream)
    _finish(harvester)


@program.command("global")
@program.arg("action", choices=("check", "prob", "count"))
@program.arg("pattern", nargs="*")
@program.arg("dims", nargs=2, type=int)
@program.arg("seed", type=int)
def global_(
    action,
    pattern=None,
    assignment=None,
    dims=None,
    trials=_cfg.get_value("trials", int, 1000),
    seed=_cfg.get_value("seed", int, None),
    csv=None,
    json=False,
    output_file=None,
    manifest=None,
):
    """Global flat-foldability of square grids.

    check decides whether an assignment folds flat, prob estimates the
    probability that a uniform valid assignment does, count counts them.

    :param action: check, prob or count.
    :param -p, --pattern <str>: The JSON pattern files (check only).
    :param -a, --assignment <str>: The assignment file (default to the one
        stored in the pattern).
    :param -d, --dims <int>: Rows and columns (prob and count).
    :param -t, --trials <int>: Samples drawn when the grid is too big to
        enumerate.
    :param -s, --seed <int>: The random seed (default to system entropy).
    :param --csv <str>: Also write the rows to this CSV file.
    :param -j, --json: Format results in JSON.
    :param -O, --output-file <str>: The output file (default to stdout).
    :param --manifest <str>: Where to write the run manifest.
    """
    if action == "check":
        if not pattern:
            raise ValueError("global check needs a pattern file")
        targets = pattern
    elif not dims:
        raise ValueError("--dims is required")
    else:
        targets = [tuple(dims)]
    if action == "prob":
        seed = resolve_seed(seed)
    config = Config(action=action, assignment=assignment, trials=trials,
                    seed=seed)
    harvester = GlobalHarvester(targets, config)
    with outstream(output_file) as stream:
        log_result(harvester, json=json, stream=stream)
    if csv and action != "check":
        write_text(csv, harvester.as_csv())
    if action == "prob":
        _emit_manifest("global", seed, [output_file, csv], manifest,
                       csv or output_file)
    _finish(harvester)


@program.command
@program.arg("name", choices=("fig5", "fig6", "fig8"))
@program.arg("seed", type=int)
@program.arg("steps", type=int)
def figure(
    name,
    size=50,
    steps=None,
    seed=_cfg.get_value("seed", int, None),
    svg=None,
    manifest=None,
):
    """Reproduce one of the illustrative scenarios.

    fig5 renders the 2 x 5 assignment that is locally but not globally
    flat-foldable, fig6 shades a block, its neighborhood and the
    neighborhood of that on a 4 x 5 grid, and fig8 runs the face-flip chain
    on a triangle lattice and renders the final state.

    :param name: fig5, fig6 or fig8.
    :param -n, --size <int>: Lattice size for fig8.
    :param -t, --steps <int>: Chain steps for fig8 (default to size**4).
    :param -s, --seed <int>: The random seed for fig8 (default to system
        entropy).
    :param --svg <str>: The SVG file to write.
    :param --manifest <str>: Where to write the run manifest.
    """
    if name == "fig5":
        pattern, assignment = sigma_sp()
        local = is_locally_flat_foldable(pattern, assignment)
        folds = is_globally_flat_foldable(pattern, assignment) is not None
        log("locally flat-foldable: {0}", "yes" if local else "no")
        log("{0}", "globally flat-foldable" if folds
            else "NOT globally flat-foldable")
        if svg:
            write_text(svg, render_svg(pattern, assignment))
    elif name == "fig6":
        pattern = square_grid(4, 5)
        block = Subgrid(1, 1, 2, 2)
        levels = {}
        ring = neighborhood(pattern, neighborhood(pattern, block))
        for level, sub in ((2, ring), (1, neighborhood(pattern, block)),
                           (0, block)):
            for face in subgrid_faces(pattern, sub):
                levels[face] = level
        log("T: {0}, N(T): {1}, N(N(T)): {2}", tuple(block),
            tuple(neighborhood(pattern, block)), tuple(ring))
        if svg:
            write_text(svg, render_svg(pattern, highlight=levels))
    else:
        seed = resolve_seed(seed)
        pattern = generate(PatternSpec("triangle", (size, size)))
        steps = size ** 4 if steps is None else steps
        result = run_chain(ChainConfig(pattern, reference_assignment(pattern),
                                       steps, seed))
        log("{0} steps, {1} flips accepted", steps, result.accepted)
        if svg:
            write_text(svg, render_svg(pattern, result.final))
        _emit_manifest("figure", seed, [svg], manifest, svg)


class Config(object):
    """An object holding config values."""

    def __init__(self, **kwargs):
        """Configuration values are passed as keyword parameters."""
        self.config_values = kwargs

    def __getattr__(self, attr):
        """If an attribute is not found inside the config values, the request
        is handed to `__getattribute__`.
        """
        if attr in self.config_values:
            return self.config_values[attr]
        return self.__getattribute__(attr)

    def __repr__(self):
        """The string representation of the Config object is just the one of
        the dictionary holding the configuration values.
        """
        return repr(self.config_values)

    def __eq__(self, other):
        """Two Config objects are equals if their contents are equal."""
        return self.config_values == other.config_values

    @classmethod
    def from_function(cls, func):
        """Construct a Config object from a function's defaults."""
        argspec = inspect.getfullargspec(func)
        args, _, _, defaults = argspec[:4]
        values = dict(zip(reversed(args), reversed(defaults or [])))
        values.update(argspec.kwonlydefaults or {})
        return cls(**values)


def log_result(harvester, **kwargs):
    """Log the results of an :class:`~foldflip.cli.harvest.Harvester object.

    Keywords parameters determine how the results are formatted. If *json* is
    `True`, then `harvester.as_json()` is called. If *csv* is `True`, then
    `harvester.as_csv()` is called. Otherwise, `harvester.to_terminal()` is
    executed and `kwargs` is directly passed to the :func:`~foldflip.cli.log`
    function.
    """
    if kwargs.get("json"):
        log(harvester.as_json(), noformat=True, **kwargs)
    elif kwargs.get("csv"):
        log(harvester.as_csv(), noformat=True, delimiter="", **kwargs)
    else:
        for msg, h_args, h_kwargs in harvester.to_terminal():
            kw = kwargs.copy()
            kw.update(h_kwargs)
            if h_kwargs.get("error", False):
                log(msg, **kw)
                log_error(h_args[0], indent=1)
                continue
            msg = [msg] if not isinstance(msg, (list, tuple)) else msg
            log_list(msg, *h_args, **kw)


def log(msg, *args, **kwargs):
    """Log a message, passing *args* to the strings' `format()` method.

    *indent*, if present as a keyword argument, specifies the indent level, so
    that `indent=0` will log normally, `indent=1` will indent the message by 4
    spaces, &c..
    *noformat*, if present and True, will cause the message not to be formatted
    in any way.
    """
    indent = 4 * kwargs.get("indent", 0)
    delimiter = kwargs.get("delimiter", "\n")
    m = msg if kwargs.get("noformat", False) else msg.format(*args)
    stream = kwargs.get("stream", sys.stdout)
    stream.write(" " * indent + m + delimiter)


def log_list(lst, *args, **kwargs):
    """Log an entire list, line by line. All the arguments are directly passed
    to :func:`~foldflip.cli.log`.
    """
    for line in lst:
        log(line, *args, **kwargs)


def log_error(msg, *args, **kwargs):
    """Log an error message. Arguments are the same as log()."""
    log("{0}{1}ERROR{2}: {3}".format(BRIGHT, RED, RESET, msg), *args, **kwargs)


@contextmanager
def outstream(outfile=None):
    """Encapsulate output stream creation as a context manager. Files get
    no color codes unless COLOR is ``yes``."""
    if outfile:
        with open(outfile, "w") as outstream:
            yield plain_stream(outstream)
    else:
        yield sys.stdout
