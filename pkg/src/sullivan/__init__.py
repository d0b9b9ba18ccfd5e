"""Sullivan minimal models of finite simplicial sets over Q.

Submodules: ``qcore`` (exact linear algebra), ``simplicial``, ``forms``
(polynomial forms on standard simplices), ``apl`` (forms on a simplicial
set and the reduction onto cochains), ``dga``, ``minmodel``, ``iso`` and
``pipeline``; ``cli`` is the command line front end.
"""

__version__ = "0.1.0"
