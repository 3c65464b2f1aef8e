"""
WSGI config for the median_gnn project, used by `manage.py runserver` to browse the admin.

For more information on this file, see
https://docs.djangoproject.com/en/5.2/howto/deployment/wsgi/
"""

import os

from django.core.wsgi import get_wsgi_application

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "median_gnn.settings")

application = get_wsgi_application()
