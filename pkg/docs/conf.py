# -*- coding: utf-8 -*-
#
# Foldflip documentation build configuration file.
#
# This file is execfile()d with the current directory set to its containing
# dir.

import os
import sys
import time
import datetime

# If extensions (or modules to document with autodoc) are in another directory,
# add these directories to sys.path here.
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__),
                                                '..')))
import foldflip

# -- General configuration -----------------------------------------------------

extensions = ['sphinx.ext.coverage', 'sphinx.ext.mathjax', 'sphinx.ext.autodoc']

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'Foldflip'
build_date = datetime.datetime.utcfromtimestamp(int(os.environ.get('SOURCE_DATE_EPOCH', time.time())))
copyright = u'{0}, Foldflip contributors'.format(build_date.year)

# The short X.Y version.
version = foldflip.__version__
# The full version, including alpha/beta/rc tags.
release = version

exclude_patterns = ['_build']
pygments_style = 'sphinx'

# -- Options for HTML output ---------------------------------------------------

html_theme = 'alabaster'
html_static_path = ['_static']
htmlhelp_basename = 'Foldflipdoc'

# -- Options for LaTeX output --------------------------------------------------

latex_elements = {
}

latex_documents = [
  ('index', 'Foldflip.tex', u'Foldflip Documentation',
   u'Foldflip contributors', 'manual'),
]

# -- Options for manual page output --------------------------------------------

man_pages = [
    ('index', 'foldflip', u'Foldflip Documentation',
     [u'Foldflip contributors'], 1)
]

# -- Options for Texinfo output ------------------------------------------------

texinfo_documents = [
  ('index', 'Foldflip', u'Foldflip Documentation',
   u'Foldflip contributors', 'Foldflip',
   'Mountain-valley assignments of origami crease patterns.',
   'Miscellaneous'),
]

mathjax_path = 'MathJax.js?config=TeX-AMS_HTML'
