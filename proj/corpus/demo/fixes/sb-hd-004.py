import requests

BASE = 'https://api.switch-bot.com/v1.1'


def list_scenes(token):
    headers = {'Authorization': token, 'sign': 's', 't': '0', 'nonce': 'n'}
    response = requests.get(f'{BASE}/scenes', headers=headers)
    return response.json()
