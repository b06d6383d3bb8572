"""Kernel for the λSym-Prop and λ̄μμ̃* proof-term calculi: typecheckers,
reduction engines, translations between the two, and checks of the
results connecting them."""

__version__ = "0.1.0"
