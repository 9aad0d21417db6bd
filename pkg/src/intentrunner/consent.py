"""Consent policies gating privileged function invocations.

Privileged entries in the function table (``shell`` by default) are an access
layer the user must acknowledge before they run. Policies answer a single
question: may this named function be invoked right now?
"""

from __future__ import annotations

from typing import Callable, Dict


class ConsentPolicy:
    """Base policy. Subclasses decide per function name."""

    def allows(self, function_name: str) -> bool:
        raise NotImplementedError


class AutoAllow(ConsentPolicy):
    def allows(self, function_name: str) -> bool:
        return True


class AutoDeny(ConsentPolicy):
    def allows(self, function_name: str) -> bool:
        return False


class InteractiveConsent(ConsentPolicy):
    """Asks once per privileged function per run and caches the answer.

    ``ask`` receives the function name and returns the user's decision; the
    default reads from standard input.
    """

    def __init__(self, ask: Callable[[str], bool] | None = None) -> None:
        self._ask = ask if ask is not None else _prompt_on_stdin
        self._decisions: Dict[str, bool] = {}

    def allows(self, function_name: str) -> bool:
        if function_name not in self._decisions:
            self._decisions[function_name] = bool(self._ask(function_name))
        return self._decisions[function_name]


def _prompt_on_stdin(function_name: str) -> bool:
    answer = input(f"allow privileged function '{function_name}'? [y/N] ")
    return answer.strip().lower() in ("y", "yes")


AUTO_ALLOW = AutoAllow()
AUTO_DENY = AutoDeny()


def policy_from_name(name: str, ask: Callable[[str], bool] | None = None) -> ConsentPolicy:
    """Build a policy from its configuration name.

    Interactive policies are stateful (one answer per function per run), so a
    fresh instance is returned on every call.
    """
    if name == "auto-allow":
        return AUTO_ALLOW
    if name == "auto-deny":
        return AUTO_DENY
    if name == "interactive":
        return InteractiveConsent(ask)
    raise ValueError(f"unknown consent policy: {name!r}")
