"""Exports the metric functions and report helpers for easy import"""
from .recon_metrics import ReconMetrics, recon_metrics
from .concordance import AttributeTable, ConcordanceReport, attribute_concordance
from .landmarks import LandmarkEntry, LandmarkReport, landmark_eval
from .probe_tables import read_attribute_table, read_landmark_set
from .reports import compare_reports, read_report, render_report, write_report
