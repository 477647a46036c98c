# Sphinx configuration for the circleLib documentation.
import os
import sys

sys.path.insert(0, os.path.abspath("../../src"))

project = "circleLib"
copyright = "2026, The circleLib Authors"
author = "The circleLib Authors"

master_doc = "index"
extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.doctest",
    "sphinx.ext.intersphinx",
    "sphinx.ext.mathjax",
    "sphinx.ext.napoleon",
    "sphinx.ext.viewcode",
    "sphinx_rtd_theme",
]
templates_path = ["_templates"]

# attrs classes document their fields through attribute docstrings
autodoc_member_order = "bysource"
autodoc_typehints = "description"

intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "fontTools": ("https://fonttools.readthedocs.io/en/latest/", None),
    "numpy": ("https://numpy.org/doc/stable/", None),
    "scipy": ("https://docs.scipy.org/doc/scipy/", None),
    "shapely": ("https://shapely.readthedocs.io/en/stable/", None),
    "networkx": ("https://networkx.org/documentation/stable/", None),
}

html_theme = "sphinx_rtd_theme"
html_title = "circleLib"
