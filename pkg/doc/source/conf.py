# -*- coding: utf-8 -*-
"""
Sphinx configuration for the csm documentation
"""
import os
import sys
sys.path.insert(0, os.path.abspath('../..'))

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.intersphinx',
    'sphinx.ext.mathjax'
]

source_suffix = '.rst'
master_doc = 'index'

project = 'Causal Structure Mapping'
author = 'Michal Kononenko'
version = '0.1'
release = '0.1'

html_theme = 'nature'

intersphinx_mapping = {
    'python': ('https://docs.python.org/3.6', None),
    'numpy': ('https://numpy.org/doc/stable/', None),
    'scipy': ('https://docs.scipy.org/doc/scipy/', None),
    'networkx': ('https://networkx.org/documentation/stable/', None)
}
