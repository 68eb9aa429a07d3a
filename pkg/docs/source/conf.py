# Configuration file for the Sphinx documentation builder.
#
# Only the options this project changes from the sphinx-quickstart defaults
# are listed here.

import pathlib
import sys
from datetime import datetime

import sphinx_rtd_theme  # noqa: F401

module_path = pathlib.Path(__file__).resolve().parents[2]
sys.path.insert(0, str(module_path))

import unitlindley  # noqa # isort: skip

# -- Project information -----------------------------------------------------

project = 'unitlindley'
author = 'unitlindley developers'
copyright = f'{datetime.now().year}, {author}'

# The short X.Y version and the full version, including alpha/beta/rc tags.
release = unitlindley.__version__
version = '.'.join(release.split('.')[:2])

# -- General configuration ---------------------------------------------------

needs_sphinx = '3.2.1'

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.autosummary',
    'sphinx.ext.doctest',
    'sphinx.ext.intersphinx',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
    'sphinx.ext.githubpages',
    'numpydoc',
    'doctr_versions_menu',
    'sphinx_rtd_theme',
]

source_suffix = '.rst'
master_doc = 'index'
language = None
exclude_patterns = []
pygments_style = 'sphinx'

# -- Options for HTML output -------------------------------------------------

html_theme = 'sphinx_rtd_theme'

autodoc_default_options = {
    'members': True,
    'show-inheritance': True,
}

intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'numpy': ('https://numpy.org/doc/stable', None),
    'scipy': ('https://docs.scipy.org/doc/scipy', None),
    'pandas': ('https://pandas.pydata.org/docs', None),
}

autosummary_generate = True
numpydoc_show_class_members = False
