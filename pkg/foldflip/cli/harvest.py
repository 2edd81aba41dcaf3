"""This module holds the base Harvester class and all its subclassess."""

import json
from fractions import Fraction

import numpy as np

from foldflip.chain import (ChainConfig, mixing_row, parse_size,
                            run_trajectories)
from foldflip.cli.colors import MV_COLORS, RESET, VERDICT_COLORS, YELLOW
from foldflip.cli.tools import read_assignment, read_pattern, rows_to_csv
from foldflip.flipgraph import (build_flip_graph, check_hypercube_isomorphism,
                                check_quotient_hypercube, graph_invariants)
from foldflip.globalfold import (count_global, count_locally_valid,
                                 estimate_global_probability,
                                 is_globally_flat_foldable)
from foldflip.miura_coloring import (ANCHOR, GridColoring, coloring_to_mv,
                                     mv_to_coloring)
from foldflip.patterns import PatternSpec, generate, reference_assignment
from foldflip.vertex import (count_single_vertex_configs,
                             exact_sample_single_vertex)

MIX_COLUMNS = ('size', 'faces', 'omega', 'tmix', 'gap', 'normalized')
PROB_COLUMNS = ('size', 'probability', 'half_width', 'mode', 'trials')
COUNT_COLUMNS = ('size', 'global', 'local')


class Harvester(object):
    """Base class defining the interface of a Harvester object.

    A Harvester has the following lifecycle:

    1. **Initialization**: `h = Harvester(targets, config)`

    2. **Execution**: `r = h.results`. `results` holds an iterable object.
       The first time `results` is accessed, `h.run()` is called. This method
       should not be subclassed. Instead, the :meth:`gobble` method should be
       implemented.

    3. **Reporting**: the methods *as_json* and *as_csv* return a string
       with the corresponding format. The method *to_terminal* is a generator
       that yields the lines to be printed in the terminal.

    Targets are whatever the command works on: pattern files, vertex sizes
    or grid dimensions.
    """

    def __init__(self, targets, config):
        """Initialize the Harvester.

        *targets* is a list of things to analyze.
        *config* is a :class:`~foldflip.cli.Config` object holding the
        configuration values specific to the Harvester.
        """
        self.targets = targets
        self.config = config
        self._results = []

    def name(self, target):
        """The key under which the results of *target* are reported."""
        return str(target)

    def gobble(self, target):
        """Subclasses must implement this method to define behavior.

        This method is called for every target and should return a
        dictionary.
        """
        raise NotImplementedError

    def run(self):
        """Start the analysis. For every target, this method calls the
        :meth:`gobble` method. Results are yielded as tuple:
        ``(name, analysis_results)``.
        """
        for target in self.targets:
            try:
                yield (self.name(target), self.gobble(target))
            except Exception as e:
                yield (self.name(target), {"error": str(e)})

    @property
    def results(self):
        """This property holds the results of the analysis.

        The first time it is accessed, an iterator is returned. Its
        elements are cached into a list as it is iterated over. Therefore, if
        `results` is accessed multiple times after the first one, a list will
        be returned.
        """

        def caching_iterator(it, r):
            """An iterator that caches another iterator."""
            for t in it:
                yield t
                r.append(t)

        if self._results:
            return self._results
        return caching_iterator(self.run(), self._results)

    @property
    def failed(self):
        """True when at least one target ended in an error."""
        return any("error" in data for _, data in self.results)

    def as_json(self):
        """Format the results as JSON."""
        return json.dumps(dict(self.results), sort_keys=True)

    def as_csv(self):
        """Format the results as CSV."""
        raise NotImplementedError

    def to_terminal(self):
        """Yields tuples representing lines to be printed to a terminal.

        The tuples have the following format: ``(line, args, kwargs)``.
        The line is then formatted with `line.format(*args, **kwargs)`.
        """
        raise NotImplementedError


def _verdict(flag, yes, no):
    return "{0}{1}{2}".format(VERDICT_COLORS[bool(flag)], yes if flag else no,
                              RESET)


def _colored_mv(text):
    return "".join(MV_COLORS[letter] + letter for letter in text) + RESET


class VertexHarvester(Harvester):
    """Count or exactly sample the valid assignments of the equal-angle
    vertex with 2n creases."""

    def gobble(self, n):
        if self.config.action == "count":
            return {"n": n, "count": count_single_vertex_configs(n)}
        rng = np.random.default_rng(self.config.seed)
        samples = [exact_sample_single_vertex(n, rng).to_string()
                   for _ in range(self.config.count)]
        return {"n": n, "samples": samples}

    def to_terminal(self):
        for name, data in self.results:
            if "error" in data:
                yield name, (data["error"],), {"error": True}
                continue
            if "count" in data:
                yield "C_{0}: {1} valid assignments", (2 * data["n"],
                                                       data["count"]), {}
            else:
                for sample in data["samples"]:
                    yield _colored_mv(sample), (), {"noformat": True}


def _initial(pattern, stored, start):
    if start == "reference":
        if stored is not None and pattern.family == "custom":
            return stored
        return reference_assignment(pattern)
    return read_assignment(start, pattern)


class ChainHarvester(Harvester):
    """Run the face-flip chain on pattern files."""

    def gobble(self, path):
        pattern, stored = read_pattern(path)
        initial = _initial(pattern, stored, self.config.start)
        config = ChainConfig(pattern, initial, self.config.steps,
                             self.config.seed, self.config.interval)
        runs = run_trajectories(config, self.config.trajectories,
                                self.config.workers)
        return {
            "steps": self.config.steps,
            "final": [r.final.to_string() for r in runs],
            "accepted": [r.accepted for r in runs],
            "face_counts": [list(r.face_counts) for r in runs],
            "trace": [[list(row) for row in r.trace] for r in runs],
        }

    def to_terminal(self):
        for name, data in self.results:
            if "error" in data:
                yield name, (data["error"],), {"error": True}
                continue
            yield name, (), {}
            for k, final in enumerate(data["final"]):
                yield "trajectory {0}: {1} of {2} steps accepted", (
                    k, data["accepted"][k], data["steps"]), {"indent": 1}
                yield _colored_mv(final), (), {"indent": 2, "noformat": True}


def _number(value):
    if value is None:
        return "-"
    if isinstance(value, float):
        return "{0:.4f}".format(value)
    return str(value)


class MixingHarvester(Harvester):
    """Exact mixing diagnostics, either on pattern files (when
    ``config.family`` is None) or on a family at several sizes."""

    def gobble(self, target):
        if self.config.family is None:
            pattern = read_pattern(target)[0]
            label = "x".join(str(d) for d in pattern.params.get("dims", []))
        else:
            dims = parse_size(target)
            pattern = generate(PatternSpec(self.config.family, dims,
                                           self.config.theta,
                                           self.config.mode))
            label = "x".join(str(d) for d in dims)
        return dict(mixing_row(pattern, label or str(target),
                               self.config.eps)._asdict())

    def as_csv(self):
        rows = [[data[k] for k in MIX_COLUMNS]
                for _, data in self.results if "error" not in data]
        return rows_to_csv(MIX_COLUMNS, rows)

    def to_terminal(self):
        for name, data in self.results:
            if "error" in data:
                yield name, (data["error"],), {"error": True}
                continue
            if data["tmix"] == "reducible":
                yield "{0}: {1}reducible{2}, {3} components", (
                    name, YELLOW, RESET, data["components"]), {}
                continue
            yield "{0}: faces {1}, states {2}, tmix {3}, gap {4}, " \
                "tmix/(F ln F) {5}", (name, data["faces"], data["omega"],
                                      data["tmix"], _number(data["gap"]),
                                      _number(data["normalized"])), {}


class FlipGraphHarvester(Harvester):
    """Build flip graphs, report their invariants and optionally run a
    structure check."""

    def __init__(self, targets, config):
        super(FlipGraphHarvester, self).__init__(targets, config)
        self.graphs = {}

    def gobble(self, path):
        pattern = read_pattern(path)[0]
        graph = build_flip_graph(pattern, self.config.strategy)
        self.graphs[path] = graph
        invariants = graph_invariants(graph)
        result = dict(invariants._asdict())
        result["states"] = len(graph)
        result["edges"] = sum(1 for _ in graph.edges())
        if self.config.check == "hypercube":
            check = check_hypercube_isomorphism(graph, pattern)
            result["check"] = {"kind": "hypercube", "ok": check.ok,
                               "dimension": check.dimension,
                               "counterexample": check.counterexample}
        elif self.config.check == "quotient":
            check = check_quotient_hypercube(graph, pattern)
            result["check"] = {"kind": "quotient", "ok": check.ok,
                               "counterexample": check.counterexample}
        elif self.config.check is not None:
            raise ValueError("unknown check {0!r}".format(self.config.check))
        return result

    def to_terminal(self):
        for name, data in self.results:
            if "error" in data:
                yield name, (data["error"],), {"error": True}
                continue
            yield name, (), {}
            yield "states {0}, edges {1}, components {2}, diameter {3}", (
                data["states"], data["edges"], data["components"],
                _number(data["diameter"])), {"indent": 1}
            if "check" in data:
                check = data["check"]
                yield "{0} check: {1}", (check["kind"], _verdict(
                    check["ok"], "passed", "FAILED")), {"indent": 1}
                if check["counterexample"]:
                    yield check["counterexample"], (), {"indent": 2,
                                                        "noformat": True}


class ColoringHarvester(Harvester):
    """Translate between Miura assignments and anchored 3-colorings."""

    def gobble(self, path):
        pattern, stored = read_pattern(path)
        if self.config.coloring:
            with open(self.config.coloring) as fobj:
                data = json.load(fobj)
            colors = tuple(tuple(row) for row in data["colors"])
            assignment = coloring_to_mv(pattern, GridColoring(colors, ANCHOR))
            return {"assignment": assignment.to_string()}
        if self.config.assignment:
            assignment = read_assignment(self.config.assignment, pattern)
        elif stored is not None:
            assignment = stored
        else:
            raise ValueError("{0} holds no assignment and none was "
                             "given".format(path))
        coloring = mv_to_coloring(pattern, assignment)
        (r, c), color = coloring.anchor
        return {"colors": [list(row) for row in coloring.colors],
                "anchor": [[r, c], color]}

    def to_terminal(self):
        for name, data in self.results:
            if "error" in data:
                yield name, (data["error"],), {"error": True}
                continue
            if "assignment" in data:
                yield data["assignment"], (), {}
                continue
            for row in data["colors"]:
                yield " ".join(str(k) for k in row), (), {}


def _size_name(dims):
    return "{0}x{1}".format(*dims)


class GlobalHarvester(Harvester):
    """Global flat-foldability of square grids: check a given assignment,
    estimate the probability that a uniform one folds, or count them."""

    def name(self, target):
        if self.config.action == "check":
            return str(target)
        return _size_name(target)

    def gobble(self, target):
        action = self.config.action
        if action == "check":
            pattern, stored = read_pattern(target)
            assignment = stored
            if self.config.assignment:
                assignment = read_assignment(self.config.assignment, pattern)
            if assignment is None:
                raise ValueError("{0} holds no assignment and none was "
                                 "given".format(target))
            witness = is_globally_flat_foldable(pattern, assignment)
            return {"globally_flat_foldable": witness is not None,
                    "layer_order": list(witness.order) if witness else None}
        m, n = target
        if action == "count":
            return {"size": _size_name(target), "global": count_global(m, n),
                    "local": count_locally_valid(m, n)}
        rng = np.random.default_rng(self.config.seed)
        estimate = estimate_global_probability(m, n, self.config.trials, rng)
        result = {"size": _size_name(target),
                  "probability": float(estimate.probability),
                  "half_width": estimate.half_width,
                  "mode": estimate.mode,
                  "trials": estimate.trials}
        if isinstance(estimate.probability, Fraction):
            result["exact"] = str(estimate.probability)
        return result

    def as_csv(self):
        columns = COUNT_COLUMNS if self.config.action == "count" \
            else PROB_COLUMNS
        rows = [[data[k] for k in columns]
                for _, data in self.results if "error" not in data]
        return rows_to_csv(columns, rows)

    def to_terminal(self):
        for name, data in self.results:
            if "error" in data:
                yield name, (data["error"],), {"error": True}
                continue
            if "globally_flat_foldable" in data:
                yield "{0}: {1}", (name, _verdict(
                    data["globally_flat_foldable"],
                    "globally flat-foldable",
                    "NOT globally flat-foldable")), {}
                if data["layer_order"]:
                    yield "layer order: {0}", (" ".join(
                        str(f) for f in data["layer_order"]),), {"indent": 1}
            elif "global" in data:
                yield "{0}: {1} of {2} locally valid assignments fold " \
                    "flat", (name, data["global"], data["local"]), {}
            else:
                exact = data.get("exact")
                yield "{0}: p = {1} +/- {2} ({3}, {4} trials){5}", (
                    name, _number(data["probability"]),
                    _number(data["half_width"]), data["mode"],
                    data["trials"], " = " + exact if exact else ""), {}
