# Configuration Sphinx de la documentation de l'amplificateur paramétrique PT-symétrique.

import os
import sys

# Les modules s'importent sous la forme src.<paquet> : la racine du dépôt doit être dans le chemin
sys.path.insert(0, os.path.abspath("../.."))

project = "Amplificateur Paramétrique PT-Symétrique"
release = "v0.1.0"
language = "fr"

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.napoleon",  # docstrings style Google (Args / Returns / Raises)
    "sphinx.ext.viewcode",
    "sphinx_rtd_theme",
    "autoapi.extension",
    "myst_parser",  # pages Markdown, y compris les inclusions de docs/
]

source_suffix = {
    ".rst": "restructuredtext",
    ".md": "markdown",
}

templates_path = ["_templates"]
exclude_patterns = []

html_theme = "sphinx_rtd_theme"
html_static_path = ["_static"]

# Référence générée à partir des docstrings de src/
autoapi_type = "python"
autoapi_dirs = ["../../src"]
autoapi_options = [
    "members",
    "undoc-members",
    "show-inheritance",
    "show-module-summary",
]
autoapi_keep_files = False
autoapi_add_toctree_entry = False
