"""
Standardized result envelope for command output.
"""


def envelope(data=None, message='', success=True):
    """
    Wrap a command result with success, message and data fields.

    Usage:
        envelope(data={'aggregate': 10.0}, message='Evaluation written')
        envelope(data=None, message='Error', success=False)
    """
    return {
        'success': success,
        'message': message,
        'data': data,
    }
