"""
Contains the end-to-end experiments. They train for minutes to hours, so they
only run when the ``CSM_ACCEPTANCE`` environment variable is ``1``
"""
