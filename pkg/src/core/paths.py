"""
Gerenciador Centralizado de Paths - EdcaSim

Uso:
    from src.core.paths import ProjectPaths

    destino = args.out or ProjectPaths.RESULTADO
    ProjectPaths.criar_diretorios(destino)
"""

from pathlib import Path
from typing import Optional


class ProjectPaths:
    """
    Caminhos fixos do projeto, relativos à raiz.

    Nada é criado na importação: só run/sweep/oracle chamam criar_diretorios().
    """

    # ========================================================================
    # DIRETÓRIOS
    # ========================================================================

    ROOT = Path(__file__).parent.parent.parent.resolve()
    CONFIG_DIR = ROOT / 'config'
    RESULTADO = ROOT / 'Resultado'
    LOGS = ROOT / 'logs'

    YAML_CONFIG = CONFIG_DIR / 'config.yaml'

    # ========================================================================
    # MÉTODOS UTILITÁRIOS
    # ========================================================================

    @classmethod
    def criar_diretorios(cls, saida: Optional[Path] = None) -> Path:
        """Cria o diretório de resultados (ou --out) e o de logs; devolve o de resultados."""
        destino = Path(saida) if saida is not None else cls.RESULTADO
        for diretorio in (destino, cls.LOGS):
            diretorio.mkdir(parents=True, exist_ok=True)
        return destino

    @staticmethod
    def resolver_cenario(nome_ou_caminho: str) -> Optional[Path]:
        """
        Path do arquivo de cenário, ou None quando o argumento é o nome de
        um cenário embutido (sem extensão YAML e sem arquivo com esse nome).
        """
        caminho = Path(nome_ou_caminho)
        if caminho.suffix.lower() in ('.yaml', '.yml') or caminho.is_file():
            return caminho
        return None


__all__ = ['ProjectPaths']
