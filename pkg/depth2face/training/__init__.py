"""Exports the training objects for easy import"""
from .train_options import TrainConfig
from .adam import AdamState, adam_step
from .train_log import TrainLog, TrainRecord
from .inference import evaluate, predict
from .trainer import DetCGANTrainer, fit, train_step
