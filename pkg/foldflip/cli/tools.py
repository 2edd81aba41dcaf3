'''This module contains various utility functions used in the CLI interface:
reading patterns and assignments, SVG rendering, CSV output, seeds and run
manifests.
'''

import csv
import datetime
import hashlib
import io
import json
import os
import sys
import xml.etree.ElementTree as et

import numpy as np

from foldflip.core import (MOUNTAIN, MVAssignment, face_classification,
                           load_pattern, loads_pattern)

SVG_NS = 'http://www.w3.org/2000/svg'
SCALE = 40.0
MARGIN = 10.0
SVG_STYLE = '''
.face { fill: none; stroke: none; }
.parity { fill: #e8e8e8; }
.level-0 { fill: #f4a582; }
.level-1 { fill: #fddbc7; }
.level-2 { fill: #f7f7f7; }
.boundary { stroke: #000000; stroke-width: 1; }
.crease { stroke: #808080; stroke-width: 1; }
.mountain { stroke: #b2182b; stroke-width: 3; }
.valley { stroke: #2166ac; stroke-width: 1; stroke-dasharray: 4 3; }
'''
MANIFEST_SUFFIX = '.manifest.json'


def read_pattern(path):
    '''Load ``(pattern, assignment)`` from a JSON pattern file.'''
    with open(path) as fobj:
        return load_pattern(fobj)


def read_assignment(path, pattern):
    '''Read an assignment for *pattern* either from a JSON pattern file or
    from a plain ``M``/``V`` string.

    :raises ValueError: if the file holds no assignment or its size does not
        match the pattern.
    '''
    with open(path) as fobj:
        text = fobj.read()
    if text.lstrip().startswith('{'):
        _, assignment = loads_pattern(text)
        if assignment is None:
            raise ValueError('{0} holds no complete assignment'.format(path))
    else:
        assignment = MVAssignment.from_string(text)
    if assignment.size != len(pattern.creases):
        raise ValueError('assignment has {0} creases, the pattern has '
                         '{1}'.format(assignment.size, len(pattern.creases)))
    return assignment


def resolve_seed(seed):
    '''Return *seed*, or fresh system entropy when it is None.'''
    if seed is None:
        return int(np.random.SeedSequence().entropy)
    return int(seed)


def _fmt(value):
    return '{0:.3f}'.format(value)


def render_svg(pattern, assignment=None, show_parity=False, highlight=None):
    '''Render *pattern* as an SVG 1.1 document.

    Mountains get the ``mountain`` class (bold, solid), valleys the
    ``valley`` class (thin, dashed) and unassigned creases ``crease``. Paper
    boundary edges are thin black lines. *highlight* maps faces to a level
    0..2 used to shade nested regions. The output only depends on the
    arguments.
    '''
    xs = [x for x, _ in pattern.vertices]
    ys = [y for _, y in pattern.vertices]
    x0, y0 = min(xs), min(ys)
    width = (max(xs) - x0) * SCALE + 2 * MARGIN
    height = (max(ys) - y0) * SCALE + 2 * MARGIN

    def point(v):
        x, y = pattern.vertices[v]
        return _fmt((x - x0) * SCALE + MARGIN), _fmt((y - y0) * SCALE + MARGIN)

    svg = et.Element('svg', {
        'xmlns': SVG_NS,
        'version': '1.1',
        'width': _fmt(width),
        'height': _fmt(height),
        'viewBox': '0 0 {0} {1}'.format(_fmt(width), _fmt(height)),
    })
    et.SubElement(svg, 'style').text = SVG_STYLE
    parity = face_classification(pattern).parity if show_parity else None
    highlight = highlight or {}
    faces = et.SubElement(svg, 'g', {'id': 'faces'})
    for f, cycle in enumerate(pattern.faces):
        classes = ['face']
        if parity is not None and parity[f]:
            classes.append('parity')
        if f in highlight:
            classes.append('level-{0}'.format(highlight[f]))
        et.SubElement(faces, 'polygon', {
            'class': ' '.join(classes),
            'points': ' '.join(','.join(point(v)) for v in cycle),
        })
    lines = et.SubElement(svg, 'g', {'id': 'creases'})
    for u, v in sorted(pattern.boundary_edges):
        _line(lines, point(u), point(v), 'boundary')
    for e, (u, v) in enumerate(pattern.creases):
        if assignment is None:
            cls = 'crease'
        else:
            cls = 'mountain' if assignment.value(e) == MOUNTAIN else 'valley'
        _line(lines, point(u), point(v), cls)
    return et.tostring(svg, encoding='unicode')


def _line(parent, p, q, cls):
    et.SubElement(parent, 'line', {
        'class': cls, 'x1': p[0], 'y1': p[1], 'x2': q[0], 'y2': q[1],
    })


def write_text(path, text):
    with open(path, 'w') as fobj:
        fobj.write(text)


def rows_to_csv(header, rows):
    '''Format *rows* (sequences in *header* order) as CSV text with a header
    row. None becomes an empty cell.'''
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow(['' if value is None else value for value in row])
    return buf.getvalue()


def file_digest(path):
    sha = hashlib.sha256()
    with open(path, 'rb') as fobj:
        for block in iter(lambda: fobj.read(65536), b''):
            sha.update(block)
    return sha.hexdigest()


def run_manifest(command, seed, outputs, argv=None):
    '''Describe a randomized run: command, argument vector, seed, library
    version, UTC timestamp and the SHA-256 digest of every output file.'''
    from foldflip import __version__

    return {
        'command': command,
        'argv': list(sys.argv if argv is None else argv),
        'seed': seed,
        'version': __version__,
        'timestamp': datetime.datetime.now(
            datetime.timezone.utc).isoformat(),
        'outputs': dict((path, file_digest(path)) for path in outputs
                        if path and os.path.exists(path)),
    }


def manifest_path(manifest, out):
    '''Explicit manifest path, else one next to *out*, else None.'''
    if manifest:
        return manifest
    if out:
        return out + MANIFEST_SUFFIX
    return None


def write_json(path, data):
    with open(path, 'w') as fobj:
        json.dump(data, fobj, sort_keys=True, indent=1)
        fobj.write('\n')


def write_manifest(path, data):
    write_json(path, data)
