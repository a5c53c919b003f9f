"""
Hierarquia de Erros - EdcaSim

Todos os erros levantados pelo simulador derivam de ErroSimulacao.
A CLI traduz ErroConfiguracao em código de saída 2.
"""

from typing import Optional


class ErroSimulacao(Exception):
    """Raiz dos erros do simulador."""


class ErroConfiguracao(ErroSimulacao):
    """Cenário ou parâmetro inválido, com o campo e a linha ofensivos."""

    def __init__(self, mensagem: str, campo: Optional[str] = None, linha: Optional[int] = None):
        self.mensagem = mensagem
        self.campo = campo
        self.linha = linha
        partes = []
        if campo:
            partes.append(f"campo '{campo}'")
        if linha is not None:
            partes.append(f"linha {linha}")
        prefixo = f"[{', '.join(partes)}] " if partes else ""
        super().__init__(f"{prefixo}{mensagem}")


class ErroEscalonamento(ErroSimulacao, ValueError):
    """Evento agendado no passado: bug de máquina de estados."""


class ErroEstado(ErroSimulacao, RuntimeError):
    """Operação chamada na fase errada da máquina de estados."""


class ErroMetricas(ErroSimulacao, ValueError):
    """Registro de entrega inconsistente (atraso negativo ou duplicado)."""


__all__ = [
    'ErroSimulacao',
    'ErroConfiguracao',
    'ErroEscalonamento',
    'ErroEstado',
    'ErroMetricas',
]
