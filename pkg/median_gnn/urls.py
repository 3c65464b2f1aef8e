"""
URL configuration for the median_gnn project.

The only web surface is the Django admin, which lists recorded experiments and their round
results when RECORD_RUNS is enabled.
"""
from django.contrib import admin
from django.urls import path

urlpatterns = [
    path("admin/", admin.site.urls),
]
