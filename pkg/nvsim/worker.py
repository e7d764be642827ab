"""
Celery application for queued simulation runs.
"""

from celery import Celery

from .config import NvsimConfig

app = Celery("nvsim", include=["nvsim.tasks"])
app.conf.update(NvsimConfig.celery_settings())
